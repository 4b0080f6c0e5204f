#include "report.hpp"

#include <json.hpp>

#include <charconv>
#include <chrono>
#include <ctime>
#include <iomanip>
#include <sstream>

namespace qdilog::cli {

namespace {

using json = nlohmann::ordered_json;

json opt_number(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }

json opt_complex(const std::optional<std::complex<double>>& z)
{
    return z ? json::array({z->real(), z->imag()}) : json(nullptr);
}

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s)
        out += c == '"' ? std::string("\"\"") : std::string(1, c);
    return out + "\"";
}

std::string csv_number(const std::optional<double>& x)
{
    if (!x)
        return "";
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, *x);
    return std::string(buf, res.ptr);
}

std::string joined_inputs(const CaseRow& c)
{
    std::string s;
    for (const auto& [k, v] : c.inputs)
        s += (s.empty() ? "" : ";") + k + "=" + v;
    return s;
}

std::string short_number(const std::optional<double>& x)
{
    if (!x)
        return "-";
    std::ostringstream os;
    os << std::setprecision(3) << std::scientific << *x;
    return os.str();
}

json config_json(const RunConfig& cfg)
{
    json j;
    j["b"] = format_complex(cfg.b);
    j["alpha"] = cfg.alpha;
    j["tol"] = cfg.tol;
    j["tol_core"] = cfg.tol_core;
    j["tol_integral"] = cfg.tol_integral;
    j["tol_six_nine"] = cfg.tol_six_nine;
    j["tol_kac"] = cfg.tol_kac;
    j["eval_rel_tol"] = cfg.eval_rel_tol;
    j["grid"] = cfg.grid;
    j["z_re"] = cfg.z_re.str();
    j["z_im"] = cfg.z_im.str();
    j["s"] = cfg.s;
    j["t"] = cfg.t;
    j["p"] = cfg.p;
    j["u"] = cfg.u;
    j["seed"] = cfg.seed;
    return j;
}

} // namespace

std::string utc_timestamp()
{
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

std::string render_verify(const std::vector<SuiteResult>& results, const RunConfig& cfg,
                          const std::string& timestamp, int exit_code)
{
    std::ostringstream os;
    if (cfg.format == OutputFormat::json) {
        json j;
        j["schema_version"] = report_schema_version;
        j["timestamp"] = timestamp;
        j["config"] = config_json(cfg);
        j["exit_code"] = exit_code;
        json suites = json::array();
        for (const auto& r : results) {
            json s;
            s["suite"] = r.suite;
            s["status"] = r.status;
            if (!r.reason.empty())
                s["reason"] = r.reason;
            s["tolerance"] = opt_number(r.tolerance);
            json cases = json::array();
            for (const auto& c : r.cases) {
                json cj;
                cj["index"] = c.index;
                json in = json::object();
                for (const auto& [k, v] : c.inputs)
                    in[k] = v;
                cj["inputs"] = in;
                cj["status"] = c.status;
                cj["deviation"] = opt_number(c.deviation);
                cj["lhs"] = opt_complex(c.lhs);
                cj["rhs"] = opt_complex(c.rhs);
                cj["error_estimate"] = opt_number(c.error_estimate);
                cj["detail"] = c.detail;
                if (cfg.timing)
                    cj["wall_seconds"] = c.wall_seconds;
                cases.push_back(std::move(cj));
            }
            s["cases"] = std::move(cases);
            suites.push_back(std::move(s));
        }
        j["suites"] = std::move(suites);
        os << j.dump(2) << "\n";
    } else if (cfg.format == OutputFormat::csv) {
        for (std::size_t i = 0; i < csv_columns.size(); ++i)
            os << (i ? "," : "") << csv_columns[i];
        if (cfg.timing)
            os << ",wall_seconds";
        os << "\n";
        for (const auto& r : results) {
            if (r.cases.empty())
                os << r.suite << ",," << r.status << ",,,,,,,,," << csv_field(r.reason) << (cfg.timing ? "," : "")
                   << "\n";
            for (const auto& c : r.cases) {
                os << r.suite << "," << c.index << "," << c.status << "," << csv_field(joined_inputs(c)) << ","
                   << csv_number(c.deviation) << "," << csv_number(r.tolerance) << ","
                   << csv_number(c.lhs ? std::optional<double>(c.lhs->real()) : std::nullopt) << ","
                   << csv_number(c.lhs ? std::optional<double>(c.lhs->imag()) : std::nullopt) << ","
                   << csv_number(c.rhs ? std::optional<double>(c.rhs->real()) : std::nullopt) << ","
                   << csv_number(c.rhs ? std::optional<double>(c.rhs->imag()) : std::nullopt) << ","
                   << csv_number(c.error_estimate) << "," << csv_field(c.detail);
                if (cfg.timing)
                    os << "," << csv_number(c.wall_seconds);
                os << "\n";
            }
        }
    } else {
        os << "b = " << format_complex(cfg.b) << ", alpha = " << cfg.alpha << ", seed = " << cfg.seed << "\n";
        for (const auto& r : results) {
            std::size_t passed = 0;
            for (const auto& c : r.cases)
                passed += c.status == "pass";
            os << "\n" << r.suite << ": " << r.status << " (" << passed << "/" << r.cases.size() << " cases";
            if (r.tolerance)
                os << ", tolerance " << short_number(r.tolerance);
            os << ")\n";
            if (!r.reason.empty())
                os << "  " << r.reason << "\n";
            for (const auto& c : r.cases) {
                os << "  " << std::setw(3) << c.index << "  " << std::left << std::setw(12) << c.status
                   << std::setw(10) << short_number(c.deviation) << std::right << "  " << joined_inputs(c);
                if (cfg.timing)
                    os << "  [" << std::fixed << std::setprecision(2) << c.wall_seconds << " s]"
                       << std::defaultfloat;
                if (c.status != "pass" && !c.detail.empty())
                    os << "\n       " << c.detail;
                os << "\n";
            }
        }
        os << "\nexit code " << exit_code << "\n";
    }
    return os.str();
}

std::string render_eval(const std::vector<EvalRow>& rows, const RunConfig& cfg, const std::string& timestamp)
{
    std::ostringstream os;
    if (cfg.format == OutputFormat::json) {
        json j;
        j["schema_version"] = report_schema_version;
        j["timestamp"] = timestamp;
        j["b"] = format_complex(cfg.b);
        json arr = json::array();
        for (const auto& r : rows) {
            json rj;
            rj["what"] = r.what;
            rj["input"] = r.input;
            rj["value"] = opt_complex(r.value);
            rj["error_estimate"] = opt_number(r.error_estimate);
            rj["flag"] = r.flag.empty() ? json(nullptr) : json(r.flag);
            arr.push_back(std::move(rj));
        }
        j["rows"] = std::move(arr);
        os << j.dump(2) << "\n";
    } else if (cfg.format == OutputFormat::csv) {
        os << "what,input,re,im,error_estimate,flag\n";
        for (const auto& r : rows)
            os << r.what << "," << csv_field(r.input) << ","
               << csv_number(r.value ? std::optional<double>(r.value->real()) : std::nullopt) << ","
               << csv_number(r.value ? std::optional<double>(r.value->imag()) : std::nullopt) << ","
               << csv_number(r.error_estimate) << "," << csv_field(r.flag) << "\n";
    } else {
        for (const auto& r : rows) {
            os << std::left << std::setw(8) << r.what << std::setw(24) << r.input << std::right;
            if (r.value)
                os << std::setprecision(15) << r.value->real() << (r.value->imag() < 0 ? " - " : " + ")
                   << std::abs(r.value->imag()) << "i  (err " << short_number(r.error_estimate) << ")";
            if (!r.flag.empty())
                os << "  [" << r.flag << "]";
            os << "\n";
        }
    }
    return os.str();
}

} // namespace qdilog::cli
