#include "oamsim/verify.hpp"

#include <cmath>
#include <numbers>

#include "oamsim/deutsch.hpp"
#include "oamsim/elements.hpp"
#include "oamsim/logic.hpp"
#include "oamsim/numfmt.hpp"
#include "oamsim/reference.hpp"

namespace oamsim::verify {

std::vector<Check> truth_tables(int l_max)
{
    const ModeSpace space = make_space(l_max);
    std::vector<Check> checks;
    for (OracleId id : kAllOracles) {
        const ElementOp u = build_oracle(space, id).composed();
        const Eigen::Matrix4d ideal = logical_matrix(id);
        for (int x = 0; x < 2; ++x) {
            for (int y = 0; y < 2; ++y) {
                const Bits in{x, y};
                const Ket k = encoded_ket(in);
                const Vector out = u.matrix().col(space.index(k.pol, k.l));
                int target = 0;
                ideal.col(in.index()).maxCoeff(&target);
                const Bits want{target / 2, target % 2};

                Vector expected = Vector::Zero(space.dimension());
                const Ket wk = encoded_ket(want);
                expected[space.index(wk.pol, wk.l)] = 1.0;
                const double dev = (out - expected).cwiseAbs().maxCoeff();

                const std::string name = std::string(to_string(id)) + " |" + std::to_string(x) + "," +
                                         std::to_string(y) + "> -> |" + std::to_string(want.x) + "," +
                                         std::to_string(want.y) + ">";
                checks.push_back({name, dev < 1e-12, "max deviation " + format_number(dev)});
            }
        }
    }
    return checks;
}

std::vector<Check> unitarity(int l_max)
{
    const ModeSpace space = make_space(l_max);
    std::vector<ElementOp> ops;
    for (double eta : {1.0, kRealisticEta}) {
        ops.push_back(qplate(space, {Rational{1, 1}, eta}));
        ops.push_back(qplate(space, {Rational{-1, 1}, eta}));
        ops.push_back(qplate(space, {Rational{1, 2}, eta}));
    }
    for (double theta : {0.0, 0.3, std::numbers::pi / 8, std::numbers::pi / 4}) {
        const std::string t = format_number(theta);
        ops.push_back(hwp(space, {theta, Aperture::full, 0.0}, "hwp(theta=" + t + ")"));
        for (double eps : {0.0, 0.25, 1.0}) {
            ops.push_back(hwp(space, {theta, Aperture::l0_only, eps},
                              "hwp(theta=" + t + ", l0, crosstalk=" + format_number(eps) + ")"));
        }
    }
    ops.push_back(dove_prism(space));
    ops.push_back(lens(space));
    for (OracleId id : kAllOracles) {
        ops.push_back(build_oracle(space, id).composed());
        const ElementOp noisy = build_oracle(space, id, kRealisticEta, 0.3).composed();
        ops.emplace_back(space, noisy.matrix(), noisy.survival_factor(), noisy.label() + " (crosstalk=0.3)");
    }

    std::vector<Check> checks;
    for (const auto& op : ops) {
        const double d = unitarity_defect(op.matrix());
        std::string name = op.label();
        if (op.kind() == OpKind::lossy) name += " [lossy " + format_number(op.survival_factor()) + "]";
        checks.push_back({name, d < kUnitarityTol, "max |U'U - I| " + format_number(d)});
    }
    return checks;
}

std::vector<Check> cross_check(int l_max)
{
    std::vector<Check> checks;
    for (BoolFn f : kAllFunctions) {
        const FnClass abstract = reference::classify_abstract(f);
        RunParams params;
        params.l_max = l_max;
        const RunReport r = run(oracle_of(f), params);
        const bool agree = to_string(r.verdict) == to_string(abstract);
        checks.push_back({std::string(to_string(f)) + " via " + std::string(to_string(oracle_of(f))), agree,
                          "optical " + std::string(to_string(r.verdict)) + ", circuit " +
                              std::string(to_string(abstract))});
    }
    return checks;
}

}  // namespace oamsim::verify
