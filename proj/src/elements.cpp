#include "oamsim/elements.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

namespace oamsim {

Rational Rational::make(std::int64_t num, std::int64_t den)
{
    if (den == 0) throw DomainError("rational with zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const std::int64_t g = std::gcd(num, den);
    return g > 1 ? Rational{num / g, den / g} : Rational{num, den};
}

std::string to_string(const Rational& r)
{
    return r.den == 1 ? std::to_string(r.num) : std::to_string(r.num) + "/" + std::to_string(r.den);
}

namespace {

std::string signed_l(int l) { return (l > 0 ? "+" : "") + std::to_string(l); }

int wrap_oam(const ModeSpace& space, int l)
{
    const int n = space.oam_count();
    return ((l + space.l_max()) % n + n) % n - space.l_max();
}

/// Lifts a polarization map (L/R coordinates) to every OAM block.
Matrix blockwise(const ModeSpace& space, auto&& block_for_l)
{
    const auto n = space.dimension();
    Matrix m = Matrix::Zero(n, n);
    for (int l = -space.l_max(); l <= space.l_max(); ++l) {
        const Eigen::Matrix2cd b = block_for_l(l);
        for (Pol out : {Pol::L, Pol::R}) {
            for (Pol in : {Pol::L, Pol::R}) {
                m(space.index(out, l), space.index(in, l)) = b(static_cast<int>(out), static_cast<int>(in));
            }
        }
    }
    return m;
}

Eigen::Matrix2cd jones_hwp(double theta)
{
    const double c = std::cos(2.0 * theta);
    const double s = std::sin(2.0 * theta);
    Eigen::Matrix2cd j;
    j << c, s, s, -c;
    return j;
}

}  // namespace

ElementOp qplate(const ModeSpace& space, const QPlateSpec& spec, std::string label)
{
    const Rational q = Rational::make(spec.q.num, spec.q.den);
    if ((2 * q.num) % q.den != 0) {
        throw DomainError("q-plate charge q=" + to_string(q) + " does not give an integer OAM shift 2q");
    }
    if (!(spec.eta > 0.0 && spec.eta <= 1.0)) {
        throw DomainError("q-plate efficiency must lie in (0, 1]");
    }
    const int shift = static_cast<int>(2 * q.num / q.den);
    if (std::abs(shift) > space.l_max()) {
        throw TruncationError("q-plate shift 2q=" + std::to_string(shift) + " exceeds l_max=" +
                              std::to_string(space.l_max()));
    }
    if (label.empty()) label = "qplate(q=" + to_string(q) + ")";

    const auto n = space.dimension();
    Matrix m = Matrix::Zero(n, n);
    std::vector<ElementOp::Guard> guards;
    for (int l = -space.l_max(); l <= space.l_max(); ++l) {
        for (Pol in : {Pol::L, Pol::R}) {
            const int target = in == Pol::L ? l + shift : l - shift;
            const int col = space.index(in, l);
            m(space.index(flipped(in), wrap_oam(space, target)), col) = 1.0;
            if (!space.contains(target)) {
                Eigen::RowVectorXcd row = Eigen::RowVectorXcd::Zero(n);
                row[col] = 1.0;
                guards.push_back({std::move(row), std::string("|") + to_char(in) + "," + signed_l(l) +
                                                      "> would be shifted to l=" + signed_l(target)});
            }
        }
    }
    return ElementOp(space, std::move(m), spec.eta, std::move(label), std::move(guards));
}

ElementOp hwp(const ModeSpace& space, const WaveplateSpec& spec, std::string label)
{
    if (!(spec.crosstalk >= 0.0 && spec.crosstalk <= 1.0)) {
        throw DomainError("waveplate cross-talk must lie in [0, 1]");
    }
    if (label.empty()) label = spec.aperture == Aperture::full ? "hwp" : "hwp(l0)";

    const Eigen::Matrix2cd main = polarization::to_circular(jones_hwp(spec.theta));
    Eigen::Matrix2cd residual_hv = Eigen::Matrix2cd::Identity();
    residual_hv(1, 1) = std::polar(1.0, spec.crosstalk * std::numbers::pi);
    const Eigen::Matrix2cd residual = polarization::to_circular(residual_hv);

    Matrix m = blockwise(space, [&](int l) -> Eigen::Matrix2cd {
        if (spec.aperture == Aperture::full || l == 0) return main;
        return residual;
    });
    return ElementOp(space, std::move(m), 1.0, std::move(label));
}

ElementOp dove_prism(const ModeSpace& space, const DovePrismSpec& spec, std::string label)
{
    if (spec.angle != 0.0) throw DomainError("only Dove prisms inclined at 0 are supported");
    const auto n = space.dimension();
    Matrix m = Matrix::Zero(n, n);
    for (int l = -space.l_max(); l <= space.l_max(); ++l) {
        for (Pol p : {Pol::L, Pol::R}) m(space.index(p, -l), space.index(p, l)) = 1.0;
    }
    return ElementOp(space, std::move(m), 1.0, label.empty() ? "dove" : std::move(label));
}

ElementOp lens(const ModeSpace& space, std::string label) { return identity_op(space, std::move(label)); }

std::vector<ElementOp> cnot_bench(const ModeSpace& space, double eta, double crosstalk)
{
    std::vector<ElementOp> chain;
    chain.push_back(qplate(space, {Rational{1, 1}, eta}, "QP1"));
    chain.push_back(lens(space, "L1"));
    chain.push_back(hwp(space, {0.0, Aperture::l0_only, crosstalk}, "HWP1"));
    chain.push_back(lens(space, "L2"));
    chain.push_back(qplate(space, {Rational{1, 1}, eta}, "QP2"));
    return chain;
}

PolarizerResult polarizer(const PhotonState& state, Axis axis)
{
    const ModeSpace& space = state.space();
    const Eigen::Vector2cd k = polarization::ket_lr(axis);
    const Eigen::Matrix2cd projector = k * k.adjoint();

    Vector v = Vector::Zero(space.dimension());
    for (int l = -space.l_max(); l <= space.l_max(); ++l) {
        const int iL = space.index(Pol::L, l);
        const int iR = space.index(Pol::R, l);
        const Eigen::Vector2cd in{state.amplitudes()[iL], state.amplitudes()[iR]};
        const Eigen::Vector2cd out = projector * in;
        v[iL] = out[0];
        v[iR] = out[1];
    }
    const double p = v.squaredNorm();
    if (p < 1e-30) return {std::nullopt, 0.0};
    return {PhotonState(space, std::move(v), state.survival()), p};
}

PhotonState hologram(const PhotonState& source, std::span<const int> oam, std::span<const Complex> weights)
{
    const ModeSpace& space = source.space();
    const Eigen::Vector2cd pol{source.amplitude(Pol::L, 0), source.amplitude(Pol::R, 0)};
    if (pol.squaredNorm() < 1.0 - 1e-12) throw DomainError("hologram input must be a Gaussian (l=0) beam");
    const PhotonState shaped = product_state(space, pol, oam, weights);
    return PhotonState(space, shaped.amplitudes(), source.survival());
}

Eigen::Matrix2cd polarization_block(const ElementOp& op, int l)
{
    const ModeSpace& space = op.space();
    Eigen::Matrix2cd b;
    for (Pol out : {Pol::L, Pol::R}) {
        for (Pol in : {Pol::L, Pol::R}) {
            b(static_cast<int>(out), static_cast<int>(in)) = op.matrix()(space.index(out, l), space.index(in, l));
        }
    }
    return b;
}

}  // namespace oamsim
