// optomech-qpt: sweep driver for the optomechanical phase-transition library.
// Reads a JSON run configuration, dispatches to the requested task and emits
// a CSV or JSON table.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "optomech/sweep.hpp"

namespace {

std::string read_all(std::istream& in) {
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"optomech-qpt: equilibrium phase-transition sweeps for a "
                 "cavity-optomechanical model and its atom-coupled extension"};

    std::string task;
    std::string config_path;
    std::string out_path;
    std::string format;
    std::string frame;
    int workers = 0;

    app.add_option("task", task,
                   "staircase | gap-sweep | landscape | variational | phase-diagram | "
                   "hybrid-spectrum | crossing-scan | convergence-audit")
        ->required();
    app.add_option("--config", config_path, "run configuration (JSON file, or - for stdin)")
        ->required();
    app.add_option("--out", out_path, "output path (default: stdout)");
    app.add_option("--format", format, "csv | json (default: csv)");
    app.add_option("--workers", workers, "row-level worker threads");
    app.add_option("--frame", frame, "printed | flipped reporting frame");

    CLI11_PARSE(app, argc, argv);

    try {
        std::string text;
        if (config_path == "-") {
            text = read_all(std::cin);
        } else {
            std::ifstream f(config_path);
            if (!f) throw optomech::ConfigError("cannot open config file: " + config_path);
            text = read_all(f);
        }
        optomech::RunConfig cfg = optomech::parse_config_text(text);

        if (optomech::to_string(cfg.task) != task)
            throw optomech::ConfigError("task", "command-line task '" + task +
                                                    "' does not match config task '" +
                                                    optomech::to_string(cfg.task) + "'");
        if (!format.empty()) {
            if (format != "csv" && format != "json")
                throw optomech::ConfigError("format", "expected csv or json");
            cfg.output_format = format;
        }
        if (workers > 0) cfg.workers = workers;
        if (!frame.empty()) {
            if (frame == "printed") cfg.report_frame = optomech::Frame::printed;
            else if (frame == "flipped") cfg.report_frame = optomech::Frame::flipped;
            else throw optomech::ConfigError("frame", "expected printed or flipped");
        }

        optomech::ResultTable table = optomech::run(cfg);
        std::string payload = cfg.output_format == "json"
                                  ? optomech::to_json(table).dump(2) + "\n"
                                  : optomech::to_csv(table);
        if (out_path.empty()) {
            std::cout << payload;
        } else {
            std::ofstream out(out_path, std::ios::binary);
            if (!out) throw optomech::ConfigError("cannot open output path: " + out_path);
            out << payload;
        }
        return optomech::exit_code(table);
    } catch (const optomech::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return 1;
    }
}
