#include "oamsim/reference.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace oamsim::reference {

namespace {

Eigen::Matrix2d hadamard()
{
    const double r = std::numbers::sqrt2 / 2.0;
    Eigen::Matrix2d h;
    h << r, r, r, -r;
    return h;
}

Eigen::Matrix4cd kron(const Eigen::Matrix2d& a, const Eigen::Matrix2d& b)
{
    Eigen::Matrix4cd m;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l) m(2 * i + k, 2 * j + l) = a(i, j) * b(k, l);
    return m;
}

}  // namespace

TwoQubitState ket(int x, int y)
{
    if (x < 0 || x > 1 || y < 0 || y > 1) throw std::invalid_argument("qubit values must be 0 or 1");
    TwoQubitState s = TwoQubitState::Zero();
    s[2 * x + y] = 1.0;
    return s;
}

TwoQubitState hadamard_both(const TwoQubitState& s) { return kron(hadamard(), hadamard()) * s; }

TwoQubitState hadamard_first(const TwoQubitState& s)
{
    return kron(hadamard(), Eigen::Matrix2d::Identity()) * s;
}

TwoQubitState apply_uf(const TwoQubitState& s, BoolFn f)
{
    TwoQubitState out = TwoQubitState::Zero();
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) out[2 * x + (y ^ evaluate(f, x))] += s[2 * x + y];
    return out;
}

double prob_first_zero(const TwoQubitState& s) { return std::norm(s[0]) + std::norm(s[1]); }

FnClass classify_abstract(BoolFn f)
{
    const TwoQubitState out = hadamard_first(apply_uf(hadamard_both(ket(0, 1)), f));
    return prob_first_zero(out) > 0.5 ? FnClass::constant : FnClass::balanced;
}

}  // namespace oamsim::reference
