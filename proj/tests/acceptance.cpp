// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.
// Expected values are written out here by hand or traced with the sparse
// tracer; library helpers that produce expectations are not used.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "bench_gen.hpp"
#include "ket_tracer.hpp"
#include "oamsim/bench_dsl.hpp"
#include "oamsim/deutsch.hpp"
#include "oamsim/elements.hpp"
#include "oamsim/logic.hpp"
#include "oamsim/reference.hpp"

using namespace oamsim;

namespace {

using Clock = std::chrono::steady_clock;

struct Tally {
    int checks = 0;
    int failed = 0;
    std::string first_failure;

    void expect(bool ok, const std::string& what)
    {
        ++checks;
        if (!ok && failed++ == 0) first_failure = what;
    }
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string num(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

int g_failures = 0;

void report(int n, const std::string& title, const Tally& t, const std::string& extra = "")
{
    const bool ok = t.failed == 0 && t.checks > 0;
    if (!ok) ++g_failures;
    std::printf("%s criterion %d: %s  (%d/%d checks%s%s)\n", ok ? "PASS" : "FAIL", n, title.c_str(),
                t.checks - t.failed, t.checks, extra.empty() ? "" : ", ", extra.c_str());
    if (!ok && !t.first_failure.empty()) std::printf("    first failure: %s\n", t.first_failure.c_str());
}

// Kets of the encoded logical basis, written out by hand: 00=|L,2>, 01=|R,-2>, 10=|R,2>, 11=|L,-2>.
const std::pair<Pol, int> kEncoded[4] = {{Pol::L, 2}, {Pol::R, -2}, {Pol::R, 2}, {Pol::L, -2}};

// Gate tables, output index for input index 2x+y.
const std::map<OracleId, std::array<int, 4>> kTables{
    {OracleId::identity, {0, 1, 2, 3}},
    {OracleId::not_gate, {1, 0, 3, 2}},
    {OracleId::cnot, {0, 1, 3, 2}},
    {OracleId::zcnot, {1, 0, 2, 3}},
};

bool is_constant(OracleId id) { return id == OracleId::identity || id == OracleId::not_gate; }

// sign * (|L> + s_pol |R>)/sqrt2 (|2> + s_oam |-2>)/sqrt2
Vector product(const ModeSpace& s, double sign, double s_pol, double s_oam)
{
    Vector v = Vector::Zero(s.dimension());
    v[s.index(Pol::L, 2)] = sign * 0.5;
    v[s.index(Pol::L, -2)] = sign * 0.5 * s_oam;
    v[s.index(Pol::R, 2)] = sign * 0.5 * s_pol;
    v[s.index(Pol::R, -2)] = sign * 0.5 * s_pol * s_oam;
    return v;
}

Vector expected_psi2(const ModeSpace& s, OracleId id)
{
    switch (id) {
    case OracleId::identity: return product(s, +1, -1, +1);
    case OracleId::not_gate: return product(s, -1, -1, +1);
    case OracleId::cnot: return product(s, +1, +1, -1);
    case OracleId::zcnot: return product(s, -1, +1, -1);
    }
    return {};
}

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void criterion1()
{
    const auto t0 = Clock::now();
    Tally t;
    const ModeSpace s = make_space(6);
    double worst = 0.0;
    for (const auto& [id, table] : kTables) {
        const ElementOp u = build_oracle(s, id).composed();
        for (int in = 0; in < 4; ++in) {
            const Vector out = apply(u, basis_state(s, kEncoded[in].first, kEncoded[in].second)).amplitudes();
            Vector want = Vector::Zero(s.dimension());
            want[s.index(kEncoded[table[in]].first, kEncoded[table[in]].second)] = 1.0;
            const double dev = (out - want).cwiseAbs().maxCoeff();
            worst = std::max(worst, dev);
            t.expect(dev < 1e-12, std::string(to_string(id)) + " row " + std::to_string(in) + " deviates by " + num(dev));
        }
    }
    const double dt = seconds_since(t0);
    t.expect(dt < 1.0, "runtime " + num(dt) + " s");
    report(1, "truth tables of the four oracles, phase +1", t, "max deviation " + num(worst) + ", " + num(dt) + " s");
}

void criterion2()
{
    const auto t0 = Clock::now();
    Tally t;
    for (OracleId id : kAllOracles) {
        const RunReport r = run(id);
        const std::string name(to_string(id));
        if (is_constant(id)) {
            t.expect(std::abs(r.p_d2 - 1.0) < 1e-12, name + " p_D2 = " + num(r.p_d2));
            t.expect(r.verdict == Verdict::constant, name + " verdict " + std::string(to_string(r.verdict)));
        } else {
            t.expect(std::abs(r.p_d1 - 1.0) < 1e-12, name + " p_D1 = " + num(r.p_d1));
            t.expect(r.verdict == Verdict::balanced, name + " verdict " + std::string(to_string(r.verdict)));
        }
    }
    const double dt = seconds_since(t0);
    t.expect(dt < 1.0, "runtime " + num(dt) + " s");
    report(2, "single-run verdicts: identity/not constant, cnot/zcnot balanced", t, num(dt) + " s");
}

void criterion3()
{
    Tally t;
    const ModeSpace s = make_space(6);
    for (OracleId id : kAllOracles) {
        const RunReport r = run(id);
        const PhotonState want(s, expected_psi2(s, id));
        const double f = fidelity_up_to_phase(r.output, want);
        t.expect(f > 1.0 - 1e-12, std::string(to_string(id)) + " fidelity " + num(f));
        // Signs matter too: compare amplitudes directly.
        const double dev = (r.output.amplitudes() - want.amplitudes()).cwiseAbs().maxCoeff();
        t.expect(dev < 1e-12, std::string(to_string(id)) + " amplitude deviation " + num(dev));
    }
    const Vector psi1 = product(s, +1, -1, +1);
    const double not_dev = (run(OracleId::not_gate).output.amplitudes() + psi1).cwiseAbs().maxCoeff();
    t.expect(not_dev < 1e-12, "NOT output + input = " + num(not_dev));
    report(3, "output states match the expected expressions; NOT output = -input", t);
}

void criterion4()
{
    Tally t;
    for (OracleId id : kAllOracles) {
        const RunReport ideal = run(id);
        const RunReport lossy = run(id, {.eta = 0.97});
        const std::string name(to_string(id));
        t.expect(std::abs(lossy.survival - 0.9409) < 1e-12, name + " survival " + num(lossy.survival));
        t.expect(std::abs(lossy.p_d1 - ideal.p_d1) < 1e-12, name + " p_D1 changed");
        t.expect(std::abs(lossy.p_d2 - ideal.p_d2) < 1e-12, name + " p_D2 changed");
    }
    report(4, "eta=0.97 per q-plate gives survival 0.9409, detector probabilities unchanged", t);
}

void criterion5()
{
    Tally t;
    int agree = 0;
    for (BoolFn f : kAllFunctions) {
        const Verdict physical = run(oracle_of(f)).verdict;
        // By definition: constant iff f(0) == f(1).
        const bool constant_by_hand = evaluate(f, 0) == evaluate(f, 1);
        const FnClass abstract = reference::classify_abstract(f);
        const bool ok = (physical == Verdict::constant) == (abstract == FnClass::constant) &&
                        (abstract == FnClass::constant) == constant_by_hand;
        agree += ok;
        t.expect(ok, std::string(to_string(f)) + " disagrees");
    }
    report(5, "physical verdicts equal abstract-circuit verdicts", t, std::to_string(agree) + "/4 agree");
}

void criterion6()
{
    Tally t;
    for (int l_max : {4, 6, 8}) {
        const ModeSpace s = make_space(l_max);
        const std::string at = " at lmax=" + std::to_string(l_max);
        std::vector<ElementOp> ops{dove_prism(s), lens(s)};
        for (Rational q : {Rational{1, 1}, Rational{1, 2}, Rational{-1, 2}, Rational{2, 1}, Rational{-1, 1}})
            for (double eta : {1.0, 0.97}) ops.push_back(qplate(s, {q, eta}));
        for (double theta : {0.0, 0.3, std::numbers::pi / 8, 1.0})
            for (double eps : {0.0, 0.1, 0.5, 1.0}) {
                ops.push_back(hwp(s, {theta, Aperture::full, eps}));
                ops.push_back(hwp(s, {theta, Aperture::l0_only, eps}));
            }
        for (const auto& op : ops) {
            const Matrix& m = op.matrix();
            const double d = (m.adjoint() * m - Matrix::Identity(s.dimension(), s.dimension())).cwiseAbs().maxCoeff();
            t.expect(d < 1e-12, op.label() + at + " unitarity defect " + num(d));
        }

        // Double q-plate is the identity where neither plate touches the edge.
        const ElementOp qp = qplate(s, {});
        const Matrix qq = qp.matrix() * qp.matrix();
        for (int l = -l_max + 2; l <= l_max - 2; ++l)
            for (Pol p : {Pol::L, Pol::R}) {
                const int i = s.index(p, l);
                t.expect(std::abs(qq(i, i) - 1.0) < 1e-12, "double q-plate column " + std::to_string(i) + at);
            }

        const Matrix I = Matrix::Identity(s.dimension(), s.dimension());
        const Matrix dp = dove_prism(s).matrix();
        t.expect((dp * dp - I).cwiseAbs().maxCoeff() < 1e-12, "dove involution" + at);
        for (double theta : {0.0, 0.3, 1.2}) {
            const Matrix h = hwp(s, {theta, Aperture::full, 0.0}).matrix();
            t.expect((h * h - I).cwiseAbs().maxCoeff() < 1e-12, "hwp involution" + at);
        }

        // Bookkeeping: every q-plate column that stays in range moves to the
        // flipped polarization with l shifted by +2q for L, -2q for R.
        for (Rational q : {Rational{1, 1}, Rational{1, 2}, Rational{-1, 2}, Rational{2, 1}}) {
            const ElementOp op = qplate(s, {q, 1.0});
            const int shift = static_cast<int>(2 * q.num / q.den);
            for (int l = -l_max; l <= l_max; ++l)
                for (Pol p : {Pol::L, Pol::R}) {
                    const int l_out = l + (p == Pol::L ? shift : -shift);
                    const Pol p_out = p == Pol::L ? Pol::R : Pol::L;
                    if (std::abs(l_out) > l_max) {
                        bool threw = false;
                        try {
                            apply(op, basis_state(s, p, l));
                        } catch (const TruncationError&) {
                            threw = true;
                        }
                        t.expect(threw, "edge column not guarded" + at);
                        continue;
                    }
                    const PhotonState out = apply(op, basis_state(s, p, l));
                    t.expect(std::abs(out.amplitude(p_out, l_out) - 1.0) < 1e-12,
                             "q-plate column " + std::to_string(l) + at);
                    // OAM gained = q times spin lost: l_out - l = q (sigma_in - sigma_out).
                    const int sigma_in = sam(p);
                    const int sigma_out = sam(p_out);
                    const double norm_out = out.amplitudes().squaredNorm();
                    t.expect((l_out - l) * q.den == q.num * (sigma_in - sigma_out) && std::abs(norm_out - 1.0) < 1e-12,
                             "angular momentum bookkeeping" + at);
                }
        }
    }
    report(6, "operator hygiene: unitarity, double q-plate, involutions, q-plate bookkeeping", t);
}

void criterion7()
{
    Tally t;
    for (OracleId id : kAllOracles) {
        const Verdict pbs = run(id, {.measure = MeasureKind::pbs}).verdict;
        const Verdict oam = run(id, {.measure = MeasureKind::oam_sorter}).verdict;
        t.expect(pbs == oam && pbs != Verdict::inconclusive, std::string(to_string(id)) + " PBS and OAM disagree");
    }
    report(7, "PBS and OAM-superposition measurements agree", t);
}

void criterion8()
{
    const auto t0 = Clock::now();
    Tally t;
    const std::uint64_t n = 100000;
    const RunParams params{.eta = 0.97, .shots = n, .seed = 2024};
    const RunReport a = run(OracleId::cnot, params);
    const RunReport b = run(OracleId::cnot, params);
    if (!a.shots || !b.shots) {
        t.expect(false, "no shot tally");
        report(8, "seeded shots", t);
        return;
    }
    const ShotTally& s = *a.shots;
    t.expect(s.total() == n, "total " + std::to_string(s.total()));
    const double p[3] = {0.9409, 0.0, 0.0591};
    const std::uint64_t got[3] = {s.n_d1, s.n_d2, s.n_lost};
    const char* names[3] = {"D1", "D2", "lost"};
    std::string freq;
    for (int k = 0; k < 3; ++k) {
        const double mean = n * p[k];
        const double sigma = std::sqrt(n * p[k] * (1.0 - p[k]));
        t.expect(std::abs(static_cast<double>(got[k]) - mean) <= 3.0 * sigma,
                 std::string(names[k]) + " count " + std::to_string(got[k]) + " outside 3 sigma");
        freq += std::string(k ? " " : "") + names[k] + "=" + std::to_string(got[k]);
    }
    t.expect(*a.shots == *b.shots, "rerun with the same seed differs");
    const double dt = seconds_since(t0);
    t.expect(dt < 10.0, "runtime " + num(dt) + " s");
    report(8, "1e5 seeded cnot shots at eta=0.97 within 3 sigma, reproducible", t, freq + ", " + num(dt) + " s");
}

void criterion9()
{
    using namespace oamsim::dsl;
    Tally t;
    const std::filesystem::path corpus{OAMSIM_CORPUS_DIR};
    int files = 0;
    std::string fig2;
    for (const auto& e : std::filesystem::directory_iterator(corpus)) {
        if (e.path().extension() != ".bench") continue;
        ++files;
        const std::string name = e.path().filename().string();
        const std::string text = slurp(e.path());
        if (name == "fig2_cnot_gate.bench") fig2 = text;
        const ParseResult r = parse(text);
        t.expect(r.ok(), name + " does not parse");
        if (!r.ok()) continue;
        const ParseResult again = parse(render(r.bench));
        t.expect(again.ok() && again.bench == r.bench, name + " does not round-trip");
        try {
            const CompiledBench c = compile(r.bench);
            t.expect(c.chain.size() == r.bench.elements.size(), name + " chain length");
        } catch (const std::exception& ex) {
            t.expect(false, name + " compile: " + ex.what());
        }
    }
    t.expect(files == 5, "corpus has " + std::to_string(files) + " files");

    benchgen::BenchGen gen(9);
    for (int k = 0; k < 200; ++k) {
        const BenchFile b = gen.next();
        const std::string text = render(b);
        const ParseResult r = parse(text);
        t.expect(r.ok() && r.bench == b && render(r.bench) == text, "random file " + std::to_string(k) + " round trip");
        try {
            const CompiledBench c1 = compile(b);
            const CompiledBench c2 = compile(r.bench);
            bool same = c1.chain.size() == c2.chain.size() && c1.chain.size() == b.elements.size();
            for (std::size_t i = 0; same && i < c1.chain.size(); ++i) same = c1.chain[i].matrix() == c2.chain[i].matrix();
            t.expect(same, "random file " + std::to_string(k) + " compiles differently after round trip");
        } catch (const std::exception& ex) {
            t.expect(false, "random file " + std::to_string(k) + " compile: " + ex.what());
        }
    }

    std::string diagnostic;
    const auto pos = fig2.find("space lmax=4");
    t.expect(pos != std::string::npos, "fig2 file has no space lmax=4 line");
    if (pos != std::string::npos) {
        fig2.replace(pos, 12, "space lmax=3");
        try {
            compile(parse(fig2).bench);
            t.expect(false, "lmax=3 compiled");
        } catch (const CompileError& e) {
            diagnostic = e.what();
            t.expect(e.kind() == CompileError::Kind::truncation, "not a truncation error");
            t.expect(e.element().starts_with("qplate"), "diagnostic names " + e.element());
        }
    }
    report(9, "DSL parse/compile/round-trip on corpus + 200 random files; lmax=3 truncation names the element", t,
           diagnostic.empty() ? "" : "\"" + diagnostic + "\"");
}

void criterion10()
{
    Tally t;
    std::vector<double> p;
    std::vector<Verdict> verdicts;
    for (int k = 0; k <= 10; ++k) {
        const double eps = k / 10.0;
        try {
            const RunReport r = run(OracleId::cnot, {.crosstalk = eps});
            p.push_back(r.p_d1);
            verdicts.push_back(r.verdict);

            // Independent trace of the prepared input through the cnot bench.
            tracer::Ket k0;
            for (int l : {2, -2}) {
                k0[{0, l}] = 0.5;
                k0[{1, l}] = -0.5;
            }
            const tracer::Ket out = tracer::qplate(tracer::hwp0(tracer::qplate(k0, 2), true, eps), 2);
            // p_D1 = |<H|.>|^2 summed over l, with <H| = (<L| + <R|)/sqrt2.
            double pd1 = 0.0;
            for (int l = -8; l <= 8; ++l) pd1 += std::norm(tracer::amp(out, 0, l) + tracer::amp(out, 1, l)) / 2.0;
            t.expect(std::abs(r.p_d1 - pd1) < 1e-12, "eps=" + num(eps) + " p_D1 " + num(r.p_d1) + " vs " + num(pd1));
        } catch (const std::exception& ex) {
            t.expect(false, "eps=" + num(eps) + " threw " + ex.what());
        }
    }
    if (p.size() == 11) {
        t.expect(std::abs(p[0] - 1.0) < 1e-12, "sweep starts at " + num(p[0]));
        for (std::size_t k = 1; k < p.size(); ++k) t.expect(std::abs(p[k] - p[k - 1]) < 0.5, "jump at step " + std::to_string(k));
        // Balanced first, then inconclusive, never constant.
        bool seen_inconclusive = false;
        for (Verdict v : verdicts) {
            t.expect(v != Verdict::constant, "verdict flipped to constant");
            if (v == Verdict::inconclusive) seen_inconclusive = true;
            else t.expect(!seen_inconclusive, "verdict returned to balanced after inconclusive");
        }
        t.expect(verdicts.front() == Verdict::balanced, "eps=0 not balanced");
        t.expect(seen_inconclusive, "never inconclusive");
    }
    std::string series;
    for (double v : p) series += (series.empty() ? "" : " ") + num(v);
    report(10, "cross-talk sweep of the cnot oracle is continuous and degrades to inconclusive", t, "p_D1: " + series);
}

}  // namespace

int main()
{
    const std::vector<std::function<void()>> criteria{criterion1, criterion2, criterion3, criterion4, criterion5,
                                                      criterion6, criterion7, criterion8, criterion9, criterion10};
    for (const auto& c : criteria) {
        try {
            c();
        } catch (const std::exception& ex) {
            ++g_failures;
            std::printf("FAIL criterion: unexpected exception: %s\n", ex.what());
        }
    }
    std::printf("%s: %d criteria failed\n", g_failures ? "FAILED" : "ALL PASSED", g_failures);
    return g_failures ? 1 : 0;
}
