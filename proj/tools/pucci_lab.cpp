// Command-line front end: runs scenario files, validates configurations,
// re-runs at doubled resolution, and re-prints saved reports.
//
// Exit codes: 0 all checks passed, 1 at least one estimate failed,
// 2 configuration error, 3 numerical abort.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pucci/errors.hpp"
#include "pucci/report.hpp"
#include "pucci/runner.hpp"
#include "pucci/scenario.hpp"

namespace {

using nlohmann::ordered_json;

std::string stem_of(const std::string& path) {
    return std::filesystem::path(path).stem().string();
}

std::string default_out_dir(const std::string& flag_value) {
    if (!flag_value.empty()) return flag_value;
    if (const char* env = std::getenv("PUCCI_LAB_OUT"); env && *env) return env;
    return "./out";
}

struct JobOutcome {
    pucci::RunResult result;
    int error_code = 0;  // 0 ok, 2 config, 3 numerical
    std::string error;
};

JobOutcome run_one(const std::string& path) {
    JobOutcome out;
    try {
        pucci::Scenario sc = pucci::Scenario::parse_file(path);
        out.result = pucci::run_scenario(sc);
    } catch (const pucci::ConfigError& e) {
        out.error_code = 2;
        out.error = e.what();
    } catch (const pucci::NumericalError& e) {
        out.error_code = 3;
        out.error = e.what();
    } catch (const pucci::ContractViolation& e) {
        out.error_code = 3;
        out.error = e.what();
    }
    return out;
}

void write_outputs(const std::string& dir, const std::string& stem,
                   const pucci::RunResult& res) {
    pucci::write_text_file(dir, stem + "-report.json", res.document.dump(2) + "\n");
    if (!res.document.contains("reports")) return;
    for (const auto& rep : res.document["reports"]) {
        if (!rep.contains("table") || !rep.contains("table_name")) continue;
        const std::string tname = rep["table_name"].get<std::string>();
        // Re-derive the CSV from the stored rows so saved artifacts and the
        // in-memory reports can never disagree.
        std::string csv = tname + "_x," + tname + "_y\n";
        for (const auto& row : rep["table"]) {
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", row[0].get<double>(),
                          row[1].get<double>());
            csv += buf;
        }
        pucci::write_text_file(dir, stem + "-" + tname + ".csv", csv);
    }
}

int cmd_run(const std::vector<std::string>& files, const std::string& out_flag, int jobs) {
    const std::string dir = default_out_dir(out_flag);
    std::vector<JobOutcome> outcomes(files.size());
    if (jobs <= 1) {
        for (std::size_t i = 0; i < files.size(); ++i) outcomes[i] = run_one(files[i]);
    } else {
        std::vector<std::future<JobOutcome>> futs;
        futs.reserve(files.size());
        for (const auto& f : files)
            futs.push_back(std::async(std::launch::async, run_one, f));
        for (std::size_t i = 0; i < files.size(); ++i) outcomes[i] = futs[i].get();
    }

    int worst = 0;
    bool any_fail = false;
    for (std::size_t i = 0; i < files.size(); ++i) {
        const auto& oc = outcomes[i];
        if (oc.error_code != 0) {
            std::cout << "error " << files[i] << ": " << oc.error << "\n";
            worst = std::max(worst, oc.error_code);
            continue;
        }
        std::cout << oc.result.summary << "\n";
        if (!oc.result.pass) any_fail = true;
        write_outputs(dir, stem_of(files[i]), oc.result);
    }
    if (worst != 0) return worst;
    return any_fail ? 1 : 0;
}

int cmd_validate(const std::vector<std::string>& files) {
    for (const auto& f : files) {
        pucci::Scenario sc = pucci::Scenario::parse_file(f);
        pucci::validate_scenario(sc);
        std::cout << "ok    " << f << "\n";
    }
    return 0;
}

int cmd_refine(const std::string& file, int factor, const std::string& out_flag) {
    const std::string dir = default_out_dir(out_flag);
    pucci::Scenario sc = pucci::Scenario::parse_file(file);
    pucci::RunResult coarse = pucci::run_scenario(sc);
    pucci::RunResult fine = pucci::run_scenario(pucci::refine_scenario(sc, factor));
    std::cout << coarse.summary << "\n" << fine.summary << "  (x" << factor << ")\n";
    if (coarse.document.contains("reports") && fine.document.contains("reports") &&
        !coarse.document["reports"].empty() && !fine.document["reports"].empty()) {
        const auto& c = coarse.document["reports"][0];
        const auto& f = fine.document["reports"][0];
        if (c.contains("fitted") && f.contains("fitted")) {
            for (auto it = c["fitted"].begin(); it != c["fitted"].end(); ++it) {
                if (!f["fitted"].contains(it.key())) continue;
                std::cout << "  " << it.key() << ": " << it.value().dump() << " -> "
                          << f["fitted"][it.key()].dump() << "\n";
            }
        }
    }
    write_outputs(dir, stem_of(file), coarse);
    write_outputs(dir, stem_of(file) + "-refined", fine);
    return coarse.pass && fine.pass ? 0 : 1;
}

int cmd_report(const std::vector<std::string>& files) {
    bool any_fail = false;
    for (const auto& f : files) {
        std::ifstream in(f);
        if (!in) throw pucci::ConfigError("cannot open report file " + f);
        ordered_json doc = ordered_json::parse(in);
        const bool pass = doc.value("pass", false);
        any_fail = any_fail || !pass;
        std::cout << (pass ? "pass  " : "FAIL  ") << doc.value("kind", std::string("?")) << "  "
                  << doc.value("headline", std::string()) << "  [" << f << "]\n";
        if (doc.contains("reports"))
            for (const auto& rep : doc["reports"])
                std::cout << "    " << (rep.value("pass", false) ? "pass" : "FAIL") << "  "
                          << rep.value("kind", std::string("?"))
                          << (rep.contains("witness") &&
                                      !rep["witness"].get<std::string>().empty()
                                  ? "  (" + rep["witness"].get<std::string>() + ")"
                                  : "")
                          << "\n";
    }
    return any_fail ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical laboratory for extremal parabolic operators"};
    app.require_subcommand(1);

    std::vector<std::string> files;
    std::string out_dir;
    int jobs = 1;
    int factor = 2;

    auto* run = app.add_subcommand("run", "Run scenario files and write reports");
    run->add_option("files", files, "Scenario files")->required()->expected(-1);
    run->add_option("--out", out_dir, "Output directory (default $PUCCI_LAB_OUT or ./out)");
    run->add_option("--jobs", jobs, "Run scenarios concurrently");

    auto* validate = app.add_subcommand("validate", "Parse and validate scenario files");
    validate->add_option("files", files, "Scenario files")->required()->expected(-1);

    auto* refine = app.add_subcommand("refine", "Run a scenario at 1x and Nx resolution");
    refine->add_option("file", files, "Scenario file")->required()->expected(1);
    refine->add_option("--factor", factor, "Refinement factor (default 2)");
    refine->add_option("--out", out_dir, "Output directory");

    auto* report = app.add_subcommand("report", "Summarize stored report JSON files");
    report->add_option("files", files, "Report files")->required()->expected(-1);

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(files, out_dir, jobs);
        if (validate->parsed()) return cmd_validate(files);
        if (refine->parsed()) return cmd_refine(files.front(), factor, out_dir);
        if (report->parsed()) return cmd_report(files);
    } catch (const pucci::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const pucci::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const pucci::ContractViolation& e) {
        std::cerr << "contract violation: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
