#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "oamsim/bench_dsl.hpp"
#include "oamsim/deutsch.hpp"
#include "oamsim/elements.hpp"
#include "oamsim/logic.hpp"
#include "oamsim/numfmt.hpp"
#include "oamsim/reference.hpp"
#include "oamsim/verify.hpp"

namespace oamsim::cli {

namespace {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Report rendering. The text form walks the same document as the JSON form, so
// every number appears in both; text uses 17 significant digits.

void render_text(const Json& j, std::ostream& os, int indent, bool in_list = false)
{
    const std::string pad(static_cast<std::size_t>(indent), ' ');
    const auto scalar = [](const Json& v) -> std::string {
        if (v.is_number_float()) return format_number(v.get<double>());
        if (v.is_string()) {
            // Quote strings that would otherwise read as numbers, e.g. "01".
            const std::string s = v.get<std::string>();
            const bool numeric = !s.empty() && s.find_first_not_of("0123456789.eE+-") == std::string::npos;
            return numeric ? v.dump() : s;
        }
        if (v.is_null()) return "-";
        return v.dump();
    };

    if (j.is_object()) {
        bool first = true;
        for (const auto& [key, value] : j.items()) {
            const std::string lead = (in_list && first) ? std::string(pad.size() >= 2 ? pad.size() - 2 : 0, ' ') + "- " : pad;
            first = false;
            if (value.is_structured() && !value.empty()) {
                os << lead << key << ":\n";
                render_text(value, os, indent + 2);
            } else {
                os << lead << key << ": " << scalar(value) << "\n";
            }
        }
    } else if (j.is_array()) {
        for (const auto& item : j) {
            if (item.is_structured()) render_text(item, os, indent + 2, true);
            else os << pad << "- " << scalar(item) << "\n";
        }
    } else {
        os << pad << scalar(j) << "\n";
    }
}

void emit(const Json& doc, bool json, std::ostream& out)
{
    if (json) out << doc.dump(2) << "\n";
    else render_text(doc, out, 0);
}

Json header(const std::vector<std::string>& args)
{
    std::string echo = "oamsim";
    for (const auto& a : args) echo += " " + a;
    Json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["command"] = echo;
    return doc;
}

std::string ket_name(Pol p, int l) { return std::string("|") + to_char(p) + "," + (l > 0 ? "+" : "") + std::to_string(l) + ">"; }

Json amplitudes_json(const PhotonState& s)
{
    Json list = Json::array();
    const ModeSpace& space = s.space();
    for (int i = 0; i < space.dimension(); ++i) {
        const Complex a = s.amplitudes()[i];
        if (std::norm(a) < 1e-24) continue;
        Json e;
        e["ket"] = ket_name(space.pol_at(i), space.oam_at(i));
        e["re"] = a.real();
        e["im"] = a.imag();
        e["probability"] = std::norm(a);
        list.push_back(e);
    }
    return list;
}

Json truth_table_json(OracleId id, int l_max)
{
    Json rows = Json::array();
    for (const TruthRow& r : truth_table(build_oracle(make_space(l_max), id))) {
        Json row;
        row["in"] = std::to_string(r.in.x) + std::to_string(r.in.y);
        row["out"] = std::to_string(r.out.x) + std::to_string(r.out.y);
        row["phase_re"] = r.phase.real();
        row["phase_im"] = r.phase.imag();
        rows.push_back(row);
    }
    return rows;
}

// ---------------------------------------------------------------------------
// deutsch

struct DeutschOptions {
    std::string oracle = "all";
    double eta = 1.0;
    double crosstalk = 0.0;
    bool realistic = false;
    std::optional<std::uint64_t> shots;
    std::uint64_t seed = 0;
    std::string measure = "pbs";
    bool json = false;
    int l_max = kDefaultLMax;
    bool verify = false;
    bool truth_table = false;
};

int cmd_deutsch(const DeutschOptions& o, const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    std::vector<OracleId> oracles;
    if (o.oracle == "all") oracles.assign(kAllOracles.begin(), kAllOracles.end());
    else oracles.push_back(*parse_oracle(o.oracle));

    RunParams params;
    params.eta = o.realistic ? kRealisticEta : o.eta;
    params.crosstalk = o.crosstalk;
    params.measure = o.measure == "pbs" ? MeasureKind::pbs : MeasureKind::oam_sorter;
    params.l_max = o.l_max;
    params.shots = o.shots;
    params.seed = o.seed;

    Json doc = header(args);
    Json& p = doc["parameters"];
    p["oracle"] = o.oracle;
    p["eta"] = params.eta;
    p["crosstalk"] = params.crosstalk;
    p["measure"] = std::string(to_string(params.measure));
    p["threshold"] = params.threshold;
    p["l_max"] = params.l_max;
    p["shots"] = o.shots ? Json(*o.shots) : Json(nullptr);
    p["seed"] = params.seed;

    bool all_verified = true;
    Json results = Json::array();
    for (OracleId id : oracles) {
        const RunReport r = run(id, params);
        const FnClass expected = class_of(function_of(id));
        Json e;
        e["oracle"] = std::string(to_string(id));
        e["function"] = std::string(to_string(function_of(id)));
        e["expected_class"] = std::string(to_string(expected));
        e["p_D1"] = r.p_d1;
        e["p_D2"] = r.p_d2;
        e["p_plus"] = r.oam.p_plus;
        e["p_minus"] = r.oam.p_minus;
        e["p_residual"] = r.oam.p_residual;
        e["survival"] = r.survival;
        e["verdict"] = std::string(to_string(r.verdict));
        e["fidelity_vs_expected"] = r.output_fidelity_vs_expected;
        if (r.shots) {
            Json& s = e["shots"];
            s["n_D1"] = r.shots->n_d1;
            s["n_D2"] = r.shots->n_d2;
            if (params.measure == MeasureKind::oam_sorter) s["n_other"] = r.shots->n_other;
            s["n_lost"] = r.shots->n_lost;
        }
        if (o.verify) {
            const bool ok = to_string(r.verdict) == to_string(expected);
            e["verified"] = ok;
            all_verified = all_verified && ok;
        }
        if (o.truth_table) e["truth_table"] = truth_table_json(id, params.l_max);
        results.push_back(e);
    }
    doc["results"] = results;
    emit(doc, o.json, out);

    if (!all_verified) {
        err << "verification failed: verdict differs from the expected class\n";
        return kVerify;
    }
    return kOk;
}

// ---------------------------------------------------------------------------
// bench

struct BenchOptions {
    std::string file;
    std::string corpus = "./benches";
    std::optional<std::string> input;
    bool json = false;
};

std::optional<std::filesystem::path> resolve(const BenchOptions& o)
{
    namespace fs = std::filesystem;
    if (fs::is_regular_file(o.file)) return fs::path(o.file);
    const fs::path in_corpus = fs::path(o.corpus) / o.file;
    if (fs::is_regular_file(in_corpus)) return in_corpus;
    return std::nullopt;
}

std::optional<std::pair<Pol, int>> parse_ket(std::string s)
{
    std::erase_if(s, [](char c) { return c == ' ' || c == '|' || c == '>'; });
    const auto comma = s.find(',');
    if (comma != 1 || (s[0] != 'L' && s[0] != 'R')) return std::nullopt;
    std::string l = s.substr(comma + 1);
    if (!l.empty() && l[0] == '+') l.erase(0, 1);
    try {
        std::size_t used = 0;
        const int v = std::stoi(l, &used);
        if (used != l.size()) return std::nullopt;
        return std::pair{s[0] == 'L' ? Pol::L : Pol::R, v};
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

int cmd_bench(bool run_mode, const BenchOptions& o, const std::vector<std::string>& args, std::ostream& out,
              std::ostream& err)
{
    const auto path = resolve(o);
    if (!path) {
        err << "bench file not found: " << o.file << " (also looked in " << o.corpus << ")\n";
        return kUsage;
    }
    std::ifstream in(*path);
    std::stringstream buf;
    buf << in.rdbuf();

    const dsl::ParseResult parsed = dsl::parse(buf.str());
    if (!parsed.ok()) {
        for (const auto& e : parsed.errors) err << path->string() << ": " << dsl::format(e) << "\n";
        return kUsage;
    }

    std::optional<std::pair<Pol, int>> ket;
    if (o.input) {
        ket = parse_ket(*o.input);
        if (!ket) {
            err << "--input expects \"<L|R>,<l>\", got '" << *o.input << "'\n";
            return kUsage;
        }
    }

    const dsl::CompiledBench bench = dsl::compile(parsed.bench);

    Json doc = header(args);
    doc["file"] = path->string();
    doc["l_max"] = bench.space.l_max();
    doc["elements"] = bench.chain.size();
    doc["measure"] = std::string(to_string(bench.measure));
    if (!run_mode) {
        doc["status"] = "ok";
        emit(doc, o.json, out);
        return kOk;
    }

    const auto [prepared, prep_probability] =
        ket ? std::pair{basis_state(bench.space, ket->first, ket->second), 1.0} : bench.preparation.prepare(bench.space);
    const PhotonState output = apply_chain(bench.chain, prepared);

    doc["input"] = amplitudes_json(prepared);
    doc["preparation_probability"] = prep_probability;
    doc["output"] = amplitudes_json(output);
    for (int i = 0; i < output.space().dimension(); ++i) {
        if (std::norm(output.amplitudes()[i]) > 1.0 - 1e-12) {
            doc["output_ket"] = ket_name(output.space().pol_at(i), output.space().oam_at(i));
        }
    }
    doc["fidelity_vs_input"] = fidelity_up_to_phase(prepared, output);
    doc["survival"] = output.survival();
    Json& m = doc["measurement"];
    if (bench.measure == MeasureKind::pbs) {
        const PbsResult r = measure_pbs(output);
        m["p_D1"] = r.p_d1;
        m["p_D2"] = r.p_d2;
        m["verdict"] = std::string(to_string(classify(r.p_d2, r.p_d1)));
    } else {
        const OamSorterResult r = measure_oam_superposition(output);
        m["p_plus"] = r.p_plus;
        m["p_minus"] = r.p_minus;
        m["p_residual"] = r.p_residual;
        m["verdict"] = std::string(to_string(classify(r.p_plus, r.p_minus)));
    }
    emit(doc, o.json, out);
    return kOk;
}

// ---------------------------------------------------------------------------
// verify

int cmd_verify(const std::string& suite, int l_max, std::ostream& out)
{
    std::vector<verify::Check> checks;
    if (suite == "truth-tables") checks = verify::truth_tables(l_max);
    else if (suite == "unitarity") checks = verify::unitarity(l_max);
    else checks = verify::cross_check(l_max);

    std::size_t passed = 0;
    for (const auto& c : checks) {
        out << (c.passed ? "PASS " : "FAIL ") << c.name << "  (" << c.detail << ")\n";
        passed += c.passed ? 1 : 0;
    }
    out << suite << ": " << passed << "/" << checks.size() << " passed\n";
    return passed == checks.size() ? kOk : kVerify;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Single-photon spin/orbital angular momentum simulator for the q-plate Deutsch bench", "oamsim"};
    app.require_subcommand(1);

    DeutschOptions dopt;
    auto* deutsch = app.add_subcommand("deutsch", "Run Deutsch's algorithm on the four oracle benches");
    deutsch->add_option("--oracle", dopt.oracle, "Oracle bench")
        ->check(CLI::IsMember({"identity", "not", "cnot", "zcnot", "all"}));
    auto* eta_opt = deutsch->add_option("--eta", dopt.eta, "Q-plate conversion efficiency")->check(CLI::Range(0.0, 1.0));
    deutsch->add_option("--crosstalk", dopt.crosstalk, "HWP1 residual retardance (units of pi)")->check(CLI::Range(0.0, 1.0));
    deutsch->add_flag("--realistic", dopt.realistic, "Use the measured q-plate efficiency 0.97")->excludes(eta_opt);
    deutsch->add_option("--shots", dopt.shots, "Number of simulated photons");
    deutsch->add_option("--seed", dopt.seed, "Seed for shot sampling");
    deutsch->add_option("--measure", dopt.measure, "Detection: PBS or OAM sorter")->check(CLI::IsMember({"pbs", "oam"}));
    deutsch->add_flag("--json", dopt.json, "Emit JSON");
    deutsch->add_option("--lmax", dopt.l_max, "OAM truncation");
    deutsch->add_flag("--verify", dopt.verify, "Exit 3 unless every verdict matches the function class");
    deutsch->add_flag("--truth-table", dopt.truth_table, "Include the ideal bench truth table");

    BenchOptions bopt;
    auto* bench = app.add_subcommand("bench", "Run or check a .bench file");
    bench->require_subcommand(1);
    bench->add_option("--corpus", bopt.corpus, "Directory searched for bench files");
    auto* bench_run = bench->add_subcommand("run", "Apply the bench to its prepared state or --input");
    bench_run->add_option("file", bopt.file, "Bench file")->required();
    bench_run->add_option("--input", bopt.input, "Input ket, e.g. \"R,+2\"");
    bench_run->add_flag("--json", bopt.json, "Emit JSON");
    bench_run->add_option("--corpus", bopt.corpus, "Directory searched for bench files");
    auto* bench_check = bench->add_subcommand("check", "Parse and compile only");
    bench_check->add_option("file", bopt.file, "Bench file")->required();
    bench_check->add_flag("--json", bopt.json, "Emit JSON");
    bench_check->add_option("--corpus", bopt.corpus, "Directory searched for bench files");

    std::string suite;
    int verify_lmax = kDefaultLMax;
    auto* verify = app.add_subcommand("verify", "Run built-in invariant suites");
    verify->add_option("suite", suite, "truth-tables | unitarity | cross-check")
        ->required()
        ->check(CLI::IsMember({"truth-tables", "unitarity", "cross-check"}));
    verify->add_option("--lmax", verify_lmax, "OAM truncation");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return kUsage;
    }

    try {
        if (deutsch->parsed()) return cmd_deutsch(dopt, args, out, err);
        if (bench->parsed()) return cmd_bench(bench_run->parsed(), bopt, args, out, err);
        return cmd_verify(suite, verify_lmax, out);
    } catch (const dsl::CompileError& e) {
        err << "compile error";
        if (e.line() > 0) err << " at line " << e.line();
        err << ": " << e.what() << "\n";
        return kPhysics;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kPhysics;
    }
}

}  // namespace oamsim::cli
