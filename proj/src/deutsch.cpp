#include "oamsim/deutsch.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "oamsim/elements.hpp"

namespace oamsim {

std::string_view to_string(MeasureKind m) { return m == MeasureKind::pbs ? "pbs" : "oam_sorter"; }

std::string_view to_string(Verdict v)
{
    switch (v) {
    case Verdict::constant: return "constant";
    case Verdict::balanced: return "balanced";
    case Verdict::inconclusive: return "inconclusive";
    }
    return "?";
}

PhotonState prepare_input(const ModeSpace& space)
{
    const std::array<int, 2> oam{+2, -2};
    const std::array<Complex, 2> weights{1.0, 1.0};
    const PhotonState shaped = hologram(basis_state(space, Pol::L, 0), oam, weights);
    // |<V|L>|^2 = 1/2 is the heralded preparation probability; the state is what matters here.
    return *polarizer(shaped, Axis::V).state;
}

PhotonState expected_output(const ModeSpace& space, OracleId id)
{
    // (|L> -+ |R>)(|2> +- |-2>)/2 with the overall sign of each oracle row.
    const bool balanced = class_of(function_of(id)) == FnClass::balanced;
    const double sign = (id == OracleId::not_gate || id == OracleId::zcnot) ? -1.0 : 1.0;
    const double r = balanced ? 1.0 : -1.0;  // relative sign of |R>
    const double m = balanced ? -1.0 : 1.0;  // relative sign of |-2>
    Vector v = Vector::Zero(space.dimension());
    v[space.index(Pol::L, +2)] = sign * 0.5;
    v[space.index(Pol::L, -2)] = sign * 0.5 * m;
    v[space.index(Pol::R, +2)] = sign * 0.5 * r;
    v[space.index(Pol::R, -2)] = sign * 0.5 * r * m;
    return PhotonState(space, std::move(v));
}

PbsResult measure_pbs(const PhotonState& state)
{
    const ModeSpace& space = state.space();
    const Eigen::Vector2cd h = polarization::ket_lr(Axis::H);
    const Eigen::Vector2cd v = polarization::ket_lr(Axis::V);
    PbsResult r;
    for (int l = -space.l_max(); l <= space.l_max(); ++l) {
        const Eigen::Vector2cd a{state.amplitude(Pol::L, l), state.amplitude(Pol::R, l)};
        r.p_d1 += std::norm(h.dot(a));
        r.p_d2 += std::norm(v.dot(a));
    }
    return r;
}

OamSorterResult measure_oam_superposition(const PhotonState& state)
{
    const double r = std::numbers::sqrt2 / 2.0;
    OamSorterResult out;
    for (Pol p : {Pol::L, Pol::R}) {
        const Complex up = state.amplitude(p, +2);
        const Complex down = state.amplitude(p, -2);
        out.p_plus += std::norm(r * (up + down));
        out.p_minus += std::norm(r * (up - down));
    }
    out.p_residual = std::max(0.0, 1.0 - out.p_plus - out.p_minus);
    return out;
}

Verdict classify(double p_constant_port, double p_balanced_port, double threshold)
{
    if (p_constant_port > threshold) return Verdict::constant;
    if (p_balanced_port > threshold) return Verdict::balanced;
    return Verdict::inconclusive;
}

namespace {

constexpr std::uint64_t kBatchSize = 1u << 16;

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// std::uniform_real_distribution is implementation-defined; this is not.
double unit_uniform(std::mt19937_64& gen) { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }

}  // namespace

ShotTally sample_shots(double p_d1, double p_d2, double p_other, double survival, std::uint64_t shots,
                       std::uint64_t seed)
{
    const double total = p_d1 + p_d2 + p_other;
    if (!(total > 0.0)) throw DomainError("detector probabilities must not all vanish");
    const double c1 = p_d1 / total;
    const double c2 = (p_d1 + p_d2) / total;

    ShotTally tally;
    for (std::uint64_t batch = 0; batch * kBatchSize < shots; ++batch) {
        std::mt19937_64 gen(splitmix64(seed ^ splitmix64(batch)));
        const std::uint64_t n = std::min(kBatchSize, shots - batch * kBatchSize);
        for (std::uint64_t k = 0; k < n; ++k) {
            if (unit_uniform(gen) >= survival) {
                ++tally.n_lost;
                continue;
            }
            const double u = unit_uniform(gen);
            if (u < c1) ++tally.n_d1;
            else if (u < c2) ++tally.n_d2;
            else ++tally.n_other;
        }
    }
    return tally;
}

RunReport run(OracleId id, const RunParams& params)
{
    const ModeSpace space = make_space(params.l_max);
    const OracleBench bench = build_oracle(space, id, params.eta, params.crosstalk);
    const PhotonState output = apply_chain(bench.elements, prepare_input(space));

    const PbsResult pbs = measure_pbs(output);
    const OamSorterResult oam = measure_oam_superposition(output);
    const Verdict verdict = params.measure == MeasureKind::pbs
                                ? classify(pbs.p_d2, pbs.p_d1, params.threshold)
                                : classify(oam.p_plus, oam.p_minus, params.threshold);

    std::optional<ShotTally> tally;
    if (params.shots) {
        tally = params.measure == MeasureKind::pbs
                    ? sample_shots(pbs.p_d1, pbs.p_d2, 0.0, output.survival(), *params.shots, params.seed)
                    : sample_shots(oam.p_minus, oam.p_plus, oam.p_residual, output.survival(), *params.shots,
                                   params.seed);
    }

    return RunReport{id,
                     params.measure,
                     pbs.p_d1,
                     pbs.p_d2,
                     oam,
                     output.survival(),
                     verdict,
                     tally,
                     fidelity_up_to_phase(output, expected_output(space, id)),
                     output};
}

}  // namespace oamsim
