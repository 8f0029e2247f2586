#pragma once

// Optical elements of the interferometer-free Deutsch bench.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "oamsim/state.hpp"

namespace oamsim {

/// Exact rational number with positive denominator in lowest terms.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    static Rational make(std::int64_t num, std::int64_t den);
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    friend bool operator==(const Rational&, const Rational&) = default;
};

std::string to_string(const Rational& r);

/// Topological charge q and conversion efficiency. 2q must be an integer.
struct QPlateSpec {
    Rational q{1, 1};
    double eta = 1.0;
};

enum class Aperture { full, l0_only };

struct WaveplateSpec {
    double theta = 0.0;
    Aperture aperture = Aperture::full;
    double crosstalk = 0.0;  // residual retardance on l != 0, in units of pi
};

struct DovePrismSpec {
    double angle = 0.0;
};

/// Measured mode-conversion efficiency of a single q-plate.
inline constexpr double kRealisticEta = 0.97;

/// |L,l> -> |R,l+2q>, |R,l> -> |L,l-2q>, all entries +1.
///
/// Columns whose image would leave the truncation are closed cyclically and
/// guarded, so the matrix stays a permutation and `apply` rejects states
/// that reach them.
ElementOp qplate(const ModeSpace& space, const QPlateSpec& spec, std::string label = "");

/// Half-wave plate with fast axis at `theta`. Jones matrix in H/V:
/// [[cos2t, sin2t], [sin2t, -cos2t]]. The l0_only variant acts on the l = 0
/// block only and leaves diag(1, exp(i*crosstalk*pi)) on every other block.
ElementOp hwp(const ModeSpace& space, const WaveplateSpec& spec, std::string label = "");

/// |sigma,l> -> |sigma,-l>. Only angle 0 is supported.
ElementOp dove_prism(const ModeSpace& space, const DovePrismSpec& spec = {}, std::string label = "");

/// Identity in the mode-index representation.
ElementOp lens(const ModeSpace& space, std::string label = "lens");

/// QP1, L1, HWP1 (l=0 aperture), L2, QP2.
std::vector<ElementOp> cnot_bench(const ModeSpace& space, double eta = 1.0, double crosstalk = 0.0);

struct PolarizerResult {
    std::optional<PhotonState> state;  // empty when nothing is transmitted
    double probability = 0.0;
};

/// Projects the polarization onto `axis` on every OAM component.
PolarizerResult polarizer(const PhotonState& state, Axis axis);

/// Computer-generated hologram acting on a Gaussian (l = 0) beam: each
/// polarization amplitude is spread over `oam` with the given weights
/// (normalized). Throws DomainError if `source` has weight outside l = 0.
PhotonState hologram(const PhotonState& source, std::span<const int> oam, std::span<const Complex> weights);

/// The 2x2 block of `op` acting on polarization at fixed OAM `l`, in L/R coordinates.
Eigen::Matrix2cd polarization_block(const ElementOp& op, int l);

}  // namespace oamsim
