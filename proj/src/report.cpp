#include "nesyv/report.hpp"

#include <algorithm>
#include <cstdio>

#include <json.hpp>

#include "nesyv/text.hpp"

namespace nesyv {

std::string report_csv(const VerificationReport& report, const VerificationReport* exact) {
    if (exact && exact->samples.size() != report.samples.size())
        throw Error("report_csv: relaxed/exact sample count mismatch");
    std::string out = "sample_id,status,lower_correct,upper_correct,runtime_s";
    if (exact)
        out += ",status_exact,lower_correct_exact,upper_correct_exact,runtime_exact_s";
    out += "\n";
    for (std::size_t i = 0; i < report.samples.size(); ++i) {
        const SampleVerdict& v = report.samples[i];
        out += std::to_string(i);
        out += ",";
        out += status_name(v.status);
        out += "," + format_double(v.lower_correct) + "," + format_double(v.upper_correct) + "," +
               format_double(v.runtime_s);
        if (exact) {
            const SampleVerdict& e = exact->samples[i];
            out += ",";
            out += status_name(e.status);
            out += "," + format_double(e.lower_correct) + "," + format_double(e.upper_correct) + "," +
                   format_double(e.runtime_s);
        }
        out += "\n";
    }
    return out;
}

std::string report_json(const VerificationReport& report, const QuerySpec& query,
                        const std::string& method, bool include_runtimes) {
    nlohmann::json doc;
    doc["format"] = "nesy-report/1";
    doc["method"] = method;
    doc["eps"] = query.eps;
    if (query.mode == QueryMode::Argmax) {
        doc["mode"] = "argmax";
    } else {
        doc["mode"] = "threshold";
        doc["output"] = query.output;
        doc["threshold"] = query.threshold;
    }

    nlohmann::json agg;
    agg["samples"] = report.samples.size();
    agg["robust"] = report.robust_count;
    agg["robustness"] = report.robustness;
    agg["mean_lower_correct"] = report.mean_lower;
    agg["mean_upper_correct"] = report.mean_upper;
    if (include_runtimes)
        agg["mean_runtime_s"] = report.mean_runtime_s;
    doc["aggregate"] = std::move(agg);

    nlohmann::json samples = nlohmann::json::array();
    for (std::size_t i = 0; i < report.samples.size(); ++i) {
        const SampleVerdict& v = report.samples[i];
        nlohmann::json s;
        s["id"] = i;
        s["status"] = status_name(v.status);
        if (v.status == SampleStatus::Failed) {
            s["error"] = v.error;
        } else {
            s["target"] = v.target;
            s["lower_correct"] = v.lower_correct;
            s["upper_correct"] = v.upper_correct;
            nlohmann::json outs = nlohmann::json::array();
            for (const Interval& iv : v.outputs)
                outs.push_back({iv.lo(), iv.hi()});
            s["outputs"] = std::move(outs);
            if (include_runtimes)
                s["runtime_s"] = v.runtime_s;
        }
        samples.push_back(std::move(s));
    }
    doc["samples"] = std::move(samples);
    return doc.dump(2) + "\n";
}

std::string report_summary_row(double eps, const VerificationReport& report) {
    auto clamp01 = [](double v) { return std::min(1.0, std::max(0.0, v)); };
    char buf[160];
    std::snprintf(buf, sizeof(buf), "eps=%-10g robustness=%6.2f%%  bounds=[%.4f, %.4f]  runtime=%.6fs",
                  eps, 100.0 * report.robustness, clamp01(report.mean_lower),
                  clamp01(report.mean_upper), report.mean_runtime_s);
    return std::string(buf);
}

} // namespace nesyv
