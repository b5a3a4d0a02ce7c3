// twc: run scenarios against the simulated bridge, replay the sample flow,
// or check the built-in threat matrix.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "twc/adapter/adapter.hpp"
#include "twc/bridge/journal.hpp"
#include "twc/common/errors.hpp"
#include "twc/harness/simulation.hpp"
#include "twc/harness/suite.hpp"

using namespace twc;
using namespace twc::harness;

namespace {

std::string short_hex(const Hash256& h)
{
    return h.hex().substr(0, 12);
}

std::string describe(const chain::EventLog& e)
{
    try {
        if (e.name == adapter::ev_transfer_requested) {
            auto r = adapter::parse_transfer_requested(e);
            return "transferId=" + std::to_string(r.transfer_id) + " recipient=" + r.recipient.hex().substr(0, 12) +
                   " call=" + to_hex(r.encoded_call) + " gas=" + std::to_string(r.gas);
        }
        if (e.name == adapter::ev_processed) {
            auto p = adapter::parse_processed(e);
            return "sourceTxHash=" + short_hex(p.source_tx_hash) + " transferId=" + std::to_string(p.transfer_id) +
                   " callStatus=" + (p.call_ok ? "1" : "0");
        }
        if (e.name == adapter::ev_already_processed) {
            auto a = adapter::parse_already_processed(e);
            return "sourceTxHash=" + short_hex(a.source_tx_hash) +
                   " originalBlockNumber=" + std::to_string(a.original_block);
        }
        if (e.name == adapter::ev_config_changed)
            return "field=" + adapter::parse_config_changed(e).field;
    } catch (const Error&) {
    }
    std::string out;
    for (const auto& [k, v] : e.attributes)
        out += (out.empty() ? "" : " ") + k + "=" + to_hex(v);
    return out;
}

void print_trace(std::ostream& out, const Simulation& sim)
{
    struct Line {
        std::uint64_t tick;
        std::string text;
    };
    std::vector<Line> lines;
    auto collect = [&](const chain::Chain& c, std::string_view side) {
        for (std::uint64_t n = 1; n <= c.head_number(); ++n) {
            auto b = c.get_block(n);
            for (const auto& e : b->events)
                lines.push_back({b->tick, "tick " + std::to_string(b->tick) + "  " + std::string(side) + " #" +
                                              std::to_string(n) + "  " + e.name + "  " + describe(e)});
        }
    };
    collect(sim.source(), "source");
    collect(sim.dest(), "dest  ");
    std::stable_sort(lines.begin(), lines.end(), [](const Line& a, const Line& b) { return a.tick < b.tick; });
    for (const auto& l : lines)
        out << l.text << "\n";
}

bool write_file(const std::string& path, const std::string& text)
{
    std::ofstream f(path, std::ios::binary);
    f << text;
    return static_cast<bool>(f);
}

int cmd_run(const std::string& file, std::optional<std::uint64_t> seed, const std::string& report_path,
            const std::string& journal_path)
{
    auto scenario = load_scenario(file);
    RunOptions options;
    options.seed = seed;
    Simulation sim(std::move(scenario), options);
    sim.run();

    auto report = sim.report().dump(2) + "\n";
    if (report_path.empty()) {
        std::cout << report;
    } else if (!write_file(report_path, report)) {
        std::cerr << "twc: cannot write " << report_path << "\n";
        return 1;
    }
    if (!journal_path.empty()) {
        std::ofstream f(journal_path, std::ios::binary);
        bridge::write_journal(f, sim.journal());
        if (!f) {
            std::cerr << "twc: cannot write " << journal_path << "\n";
            return 1;
        }
    }
    if (!report_path.empty())
        std::cout << sim.scenario().name << ": " << sim.deliveries().size() << " delivered, "
                  << sim.violations().size() << " violations, impact " << to_string(sim.classification()) << "\n";
    return 0;
}

int cmd_demo()
{
    Simulation sim(parse_scenario(demo_document()));
    sim.run();
    print_trace(std::cout, sim);
    std::cout << "\njournal\n";
    for (const auto& e : sim.journal())
        std::cout << "  " << e.line() << "\n";
    const auto& report = sim.report();
    auto value = report["destStorage"]["value"].get<std::string>();
    std::cout << "\ndest.storage value = " << value << "\n";
    return value == "1" && sim.violations().empty() ? 0 : 1;
}

int cmd_suite(const std::string& export_dir)
{
    if (!export_dir.empty()) {
        std::filesystem::create_directories(export_dir);
        int n = 0;
        for (const auto& doc : builtin_suite_documents()) {
            std::string name = doc["name"].get<std::string>();
            std::string file;
            for (char c : name)
                file += std::isalnum(static_cast<unsigned char>(c)) ? c : '_';
            std::ostringstream path;
            path << export_dir << "/" << std::setw(2) << std::setfill('0') << n++ << "_" << file << ".json";
            write_file(path.str(), doc.dump(2) + "\n");
        }
    }

    auto rows = run_suite(builtin_suite());
    std::size_t width = 10;
    for (const auto& r : rows)
        width = std::max(width, r.name.size());
    std::cout << std::left << std::setw(static_cast<int>(width)) << "scenario"
              << "  risk        predicted  actual   delivered  violations  stalls  result\n";
    bool all = true;
    for (const auto& r : rows) {
        all = all && r.matches();
        std::cout << std::left << std::setw(static_cast<int>(width)) << r.name << "  " << std::setw(10) << r.risk
                  << "  " << std::setw(9) << to_string(r.predicted) << "  " << std::setw(7) << to_string(r.actual)
                  << "  " << std::setw(9) << r.delivered << "  " << std::setw(10) << r.violations << "  "
                  << std::setw(6) << r.stalls << "  " << (r.matches() ? "match" : "MISMATCH") << "\n";
    }
    std::cout << (all ? "all classifications match their predictions\n" : "some classifications differ\n");
    return all ? 0 : 1;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Deterministic testbed for a notary-based cross-chain bridge"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "Run one scenario file and emit its report");
    std::string file;
    std::optional<std::uint64_t> seed;
    std::string report_path;
    std::string journal_path;
    run->add_option("scenario", file, "Scenario file (JSON)")->required();
    run->add_option("--seed", seed, "Override the scenario seed");
    run->add_option("--report", report_path, "Write the report here instead of stdout");
    run->add_option("--journal", journal_path, "Write the bridge journal here");

    app.add_subcommand("demo", "Relay one setValue(1) call and print the event trace");

    auto* suite = app.add_subcommand("suite", "Run the threat-matrix scenarios; exit 0 iff every prediction holds");
    std::string export_dir;
    suite->add_option("--export", export_dir, "Also write the scenario files to this directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed())
            return cmd_run(file, seed, report_path, journal_path);
        if (suite->parsed())
            return cmd_suite(export_dir);
        return cmd_demo();
    } catch (const ConfigError& e) {
        std::cerr << "twc: invalid scenario: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "twc: " << e.what() << "\n";
        return 1;
    }
}
