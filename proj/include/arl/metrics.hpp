#pragma once

#include <cstdint>
#include <fstream>
#include <mutex>
#include <string>

#include <json.hpp>

#include "arl/errors.hpp"

namespace arl {

// One evaluation point. Emitted as line-delimited JSON with a fixed key
// set; frames are nondecreasing within a run.
struct MetricRecord {
    std::string run_id;
    int thread_count = 0;
    double wall_clock_seconds = 0.0;
    std::int64_t frames = 0;
    double eval_mean_score = 0.0;
    double eval_std = 0.0;
    double current_eta = 0.0;

    bool operator==(const MetricRecord&) const = default;
};

inline std::string render_metric_line(const MetricRecord& r) {
    nlohmann::json j;
    j["run_id"] = r.run_id;
    j["thread_count"] = r.thread_count;
    j["wall_clock_seconds"] = r.wall_clock_seconds;
    j["frames"] = r.frames;
    j["eval_mean_score"] = r.eval_mean_score;
    j["eval_std"] = r.eval_std;
    j["current_eta"] = r.current_eta;
    return j.dump();
}

// Strict schema: exactly the documented keys with the documented types.
inline MetricRecord parse_metric_line(const std::string& line) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("metric line is not valid JSON: ") + e.what());
    }
    if (!j.is_object() || j.size() != 7) throw ConfigError("metric line must have exactly 7 keys");
    auto require = [&j](const char* key, bool ok) {
        if (!j.contains(key) || !ok) throw ConfigError(std::string("bad metric field: ") + key);
    };
    require("run_id", j.contains("run_id") && j["run_id"].is_string());
    require("thread_count", j.contains("thread_count") && j["thread_count"].is_number_integer());
    require("wall_clock_seconds",
            j.contains("wall_clock_seconds") && j["wall_clock_seconds"].is_number());
    require("frames", j.contains("frames") && j["frames"].is_number_integer());
    require("eval_mean_score", j.contains("eval_mean_score") && j["eval_mean_score"].is_number());
    require("eval_std", j.contains("eval_std") && j["eval_std"].is_number());
    require("current_eta", j.contains("current_eta") && j["current_eta"].is_number());

    MetricRecord r;
    r.run_id = j["run_id"].get<std::string>();
    r.thread_count = j["thread_count"].get<int>();
    r.wall_clock_seconds = j["wall_clock_seconds"].get<double>();
    r.frames = j["frames"].get<std::int64_t>();
    r.eval_mean_score = j["eval_mean_score"].get<double>();
    r.eval_std = j["eval_std"].get<double>();
    r.current_eta = j["current_eta"].get<double>();
    return r;
}

// Line-delimited metric sink. All appends funnel through one writer under a
// lock, so lines are never interleaved; each line is flushed whole.
class MetricsWriter {
public:
    explicit MetricsWriter(const std::string& path) : out_(path, std::ios::trunc) {
        if (!out_) throw RuntimeFault("cannot open metrics file " + path);
    }

    void append(const MetricRecord& r) {
        const std::string line = render_metric_line(r);
        std::lock_guard<std::mutex> lock(mu_);
        out_ << line << '\n';
        out_.flush();
    }

private:
    std::mutex mu_;
    std::ofstream out_;
};

}  // namespace arl
