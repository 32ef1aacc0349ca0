// cxrl: command-line driver for the cxrestrict laboratory.
//
// Subcommands map onto library operations through the C API; configuration
// comes from an optional JSON file with flag overrides (flags win). Exit
// codes: 0 all checks passed, 1 violations found (reports still written),
// 2 configuration or IO error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cxrestrict.h"
#include "json.hpp"

namespace {

using Json = nlohmann::ordered_json;

struct CString {
    char* ptr = nullptr;
    ~CString() { cxr_string_free(ptr); }
};

int fail_config(const std::string& msg) {
    std::cerr << "error: " << msg << "\n";
    return 2;
}

std::optional<Json> load_json_file(const std::string& path, std::string* err) {
    std::ifstream in(path);
    if (!in) {
        *err = "cannot open '" + path + "'";
        return std::nullopt;
    }
    std::stringstream ss;
    ss << in.rdbuf();
    Json j = Json::parse(ss.str(), nullptr, false);
    if (j.is_discarded()) {
        *err = "file '" + path + "' is not valid JSON";
        return std::nullopt;
    }
    return j;
}

std::vector<double> parse_grid(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (!tok.empty()) out.push_back(std::stod(tok));
    }
    return out;
}

void print_summary_lines(const Json& summary) {
    std::string cmd = summary.value("command", std::string("?"));
    if (cmd == "selftest" && summary.contains("checks")) {
        for (const auto& c : summary.at("checks")) {
            std::cout << (c.value("passed", false) ? "[PASS] " : "[FAIL] ")
                      << c.value("name", std::string("?")) << ": "
                      << c.value("detail", std::string()) << "\n";
        }
    }
    std::ostringstream line;
    line << (summary.value("passed", false) ? "[PASS] " : "[FAIL] ") << cmd;
    if (summary.contains("report")) {
        const Json& r = summary.at("report");
        if (r.contains("min_ratio")) line << " min_ratio=" << r.at("min_ratio").dump();
        if (r.contains("violations")) line << " violations=" << r.at("violations").dump();
        if (r.contains("slope")) line << " slope=" << r.at("slope").dump();
        if (r.contains("fitted_exponent")) {
            line << " exponent=" << r.at("fitted_exponent").dump();
        }
        if (r.contains("eps_found")) line << " eps=" << r.at("eps_found").dump();
    }
    if (summary.contains("cells")) line << " cells=" << summary.at("cells").dump();
    if (summary.contains("coverage_fraction")) {
        line << " coverage=" << summary.at("coverage_fraction").dump();
    }
    std::cout << line.str() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cxrl: verification laboratory for complex curves of simple type"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", []() { return std::string(cxr_version()); });

    std::string config_path, curve_path, out_dir = "out", prefix;
    unsigned long long seed = 0;
    bool seed_set = false;
    app.add_option("--config", config_path, "JSON config file (flags override it)");
    app.add_option("--curve", curve_path, "curve JSON file");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--prefix", prefix, "output file prefix (default: command name)");
    app.add_option("--seed", seed, "base RNG seed")->each([&](const std::string&) {
        seed_set = true;
    });

    // Per-command numeric overrides collected generically into params.
    struct Override {
        std::string key;
        std::string value;  // stored as text; parsed into JSON below
    };
    std::vector<Override> overrides;
    auto add_num = [&](CLI::App* cmd, const std::string& flag, const std::string& key,
                       const std::string& help) {
        cmd->add_option_function<std::string>(
               flag, [&overrides, key](const std::string& v) { overrides.push_back({key, v}); },
               help)
            ->expected(1);
    };

    CLI::App* decompose = app.add_subcommand("decompose", "build a decomposition certificate");
    add_num(decompose, "--radius", "disk_radius", "working disk radius");
    add_num(decompose, "--sector-eps", "sector_eps", "starting sector half-angle parameter");
    add_num(decompose, "--kmax", "kmax", "comparability bound on gap cells");
    add_num(decompose, "--coverage-samples", "coverage_samples", "coverage sample count");

    CLI::App* vjm = app.add_subcommand("verify-jacobian-monomial",
                                       "monomial Jacobian lower bound in a sector");
    add_num(vjm, "--d", "d", "ambient complex dimension");
    add_num(vjm, "--N", "N", "monomial degree");
    add_num(vjm, "--m", "m", "offspring shift count");
    add_num(vjm, "--eps", "eps", "sector parameter");
    add_num(vjm, "--samples", "samples", "sample count");

    CLI::App* vj3 = app.add_subcommand("verify-jacobian-d3",
                                       "d=3 per-cell Jacobian lower bound over a certificate");
    add_num(vj3, "--samples-per-cell", "samples_per_cell", "samples per certificate cell");
    add_num(vj3, "--radius", "disk_radius", "working disk radius");
    add_num(vj3, "--crosscheck-per-cell", "crosscheck_per_cell",
            "per-cell integral-representation crosschecks");

    CLI::App* vt = app.add_subcommand("verify-torsion", "offspring torsion lower bound");
    add_num(vt, "--eps", "eps", "sector parameter");
    add_num(vt, "--samples", "samples", "sample count");
    vt->add_option_function<std::string>(
        "--region",
        [&overrides](const std::string& v) { overrides.push_back({"region", "\"" + v + "\""}); },
        "sector or cells");

    CLI::App* vs = app.add_subcommand("verify-sublevel", "Vandermonde sublevel-set exponent");
    add_num(vs, "--d", "d", "ambient complex dimension");
    add_num(vs, "--samples", "samples", "Monte Carlo sample count");
    add_num(vs, "--u-min", "u_min", "smallest threshold");
    add_num(vs, "--u-max", "u_max", "largest threshold");
    add_num(vs, "--grid-points", "grid_points", "number of thresholds");

    CLI::App* vw = app.add_subcommand("verify-weight-growth", "weight growth exponent");
    add_num(vw, "--d", "d", "ambient complex dimension");
    add_num(vw, "--N", "N", "monomial degree");
    vw->add_option_function<std::string>(
        "--R-grid",
        [&overrides](const std::string& v) {
            Json arr = Json::array();
            for (double x : parse_grid(v)) arr.push_back(x);
            overrides.push_back({"R_grid", arr.dump()});
        },
        "comma-separated radii");

    CLI::App* vo = app.add_subcommand("verify-weight-optimality",
                                      "parallelepiped volume and containment");
    add_num(vo, "--eps-start", "eps_start", "starting epsilon for the containment search");
    add_num(vo, "--samples", "samples", "containment samples");
    vo->add_option_function<std::string>(
        "--a",
        [&overrides](const std::string& v) {
            auto g = parse_grid(v);
            Json arr = Json::array({g.size() > 0 ? g[0] : 0.0, g.size() > 1 ? g[1] : 0.0});
            overrides.push_back({"a", arr.dump()});
        },
        "anchor point re,im");

    CLI::App* es = app.add_subcommand("extension-scan", "extension-operator scans");
    es->add_option_function<std::string>(
        "--mode",
        [&overrides](const std::string& v) { overrides.push_back({"mode", "\"" + v + "\""}); },
        "homogeneity or lambda");
    es->add_option_function<std::string>(
        "--R-grid",
        [&overrides](const std::string& v) {
            Json arr = Json::array();
            for (double x : parse_grid(v)) arr.push_back(x);
            overrides.push_back({"R_grid", arr.dump()});
        },
        "comma-separated radii");
    es->add_option_function<std::string>(
        "--lambda-grid",
        [&overrides](const std::string& v) {
            Json arr = Json::array();
            for (double x : parse_grid(v)) arr.push_back(x);
            overrides.push_back({"lambda_grid", arr.dump()});
        },
        "comma-separated lambda values");

    CLI::App* st = app.add_subcommand("selftest", "run the built-in fixture suite");
    (void)st;

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;  // flag/usage problems are configuration errors
    }
    CLI::App* sub = app.get_subcommands().front();
    std::string command = sub->get_name();

    Json config = Json::object();
    if (!config_path.empty()) {
        std::string err;
        auto loaded = load_json_file(config_path, &err);
        if (!loaded) return fail_config(err);
        if (!loaded->is_object()) return fail_config("config root must be a JSON object");
        config = *loaded;
    }
    config["command"] = command;
    if (seed_set || !config.contains("seed")) config["seed"] = seed_set ? seed : 1;
    if (!curve_path.empty()) {
        std::string err;
        auto curve = load_json_file(curve_path, &err);
        if (!curve) return fail_config(err);
        config["curve"] = *curve;
    }
    if (!config.contains("params")) config["params"] = Json::object();
    for (const auto& ov : overrides) {
        Json v = Json::parse(ov.value, nullptr, false);
        if (v.is_discarded()) return fail_config("flag value '" + ov.value + "' is not valid");
        config["params"][ov.key] = v;
    }

    cxr_run_result* result = nullptr;
    cxr_status status = cxr_run(config.dump().c_str(), &result);
    if (status != CXR_OK) {
        std::cerr << "error: " << cxr_last_error() << "\n";
        if (status == CXR_ERR_PARSE || status == CXR_ERR_INVALID_ARGUMENT) return 2;
        return 1;
    }
    std::unique_ptr<cxr_run_result, void (*)(cxr_run_result*)> guard(result,
                                                                     &cxr_run_result_free);

    std::string stem = prefix.empty() ? command : prefix;
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) return fail_config("cannot create output directory '" + out_dir + "'");

    size_t nfiles = 0;
    cxr_run_file_count(result, &nfiles);
    for (size_t i = 0; i < nfiles; ++i) {
        CString name, data;
        if (cxr_run_file_name(result, i, &name.ptr) != CXR_OK ||
            cxr_run_file_data(result, i, &data.ptr) != CXR_OK) {
            return fail_config(cxr_last_error());
        }
        std::filesystem::path path = std::filesystem::path(out_dir) / (stem + "_" + name.ptr);
        std::ofstream out(path, std::ios::binary);
        if (!out) return fail_config("cannot write '" + path.string() + "'");
        out << data.ptr;
    }
    CString summary_text;
    if (cxr_run_summary_json(result, &summary_text.ptr) != CXR_OK) {
        return fail_config(cxr_last_error());
    }
    {
        std::filesystem::path path =
            std::filesystem::path(out_dir) / (stem + "_summary.json");
        std::ofstream out(path, std::ios::binary);
        if (!out) return fail_config("cannot write '" + path.string() + "'");
        out << summary_text.ptr << "\n";
    }

    Json summary = Json::parse(summary_text.ptr, nullptr, false);
    if (!summary.is_discarded()) print_summary_lines(summary);

    int violations = 0;
    cxr_run_violations_found(result, &violations);
    return violations ? 1 : 0;
}
