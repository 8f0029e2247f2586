#pragma once

// Runs Deutsch's algorithm on the optical bench: prepare, apply U_f, detect.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "oamsim/logic.hpp"
#include "oamsim/oracle.hpp"
#include "oamsim/state.hpp"

namespace oamsim {

enum class MeasureKind { pbs, oam_sorter };
enum class Verdict { constant, balanced, inconclusive };

std::string_view to_string(MeasureKind m);
std::string_view to_string(Verdict v);

inline constexpr double kDefaultThreshold = 0.99;

/// Source photon |L,0>, hologram sets the OAM superposition, polarizer selects
/// V. The result is (|L> - |R>)(|2> + |-2>)/2, i.e. i|V>(|2> + |-2>)/sqrt2.
PhotonState prepare_input(const ModeSpace& space);

/// Output of the ideal bench for each oracle, with signs.
PhotonState expected_output(const ModeSpace& space, OracleId id);

struct PbsResult {
    double p_d1 = 0.0;  // transmitted, horizontal
    double p_d2 = 0.0;  // reflected, vertical
};

PbsResult measure_pbs(const PhotonState& state);

struct OamSorterResult {
    double p_plus = 0.0;    // (|2> + |-2>)/sqrt2, both polarizations
    double p_minus = 0.0;   // (|2> - |-2>)/sqrt2
    double p_residual = 0.0;
};

OamSorterResult measure_oam_superposition(const PhotonState& state);

Verdict classify(double p_constant_port, double p_balanced_port, double threshold = kDefaultThreshold);

struct ShotTally {
    std::uint64_t n_d1 = 0;     // PBS: D1; OAM sorter: antisymmetric port
    std::uint64_t n_d2 = 0;     // PBS: D2; OAM sorter: symmetric port
    std::uint64_t n_other = 0;  // OAM sorter only: |l| != 2
    std::uint64_t n_lost = 0;

    std::uint64_t total() const { return n_d1 + n_d2 + n_other + n_lost; }
    friend bool operator==(const ShotTally&, const ShotTally&) = default;
};

/// Draws `shots` photons. Each photon is lost with probability 1 - survival,
/// otherwise it clicks a port according to the conditional probabilities.
/// The stream is split into fixed-size batches seeded from (seed, batch index),
/// so tallies do not depend on how batches are scheduled.
ShotTally sample_shots(double p_d1, double p_d2, double p_other, double survival, std::uint64_t shots,
                       std::uint64_t seed);

struct RunParams {
    double eta = 1.0;
    double crosstalk = 0.0;
    MeasureKind measure = MeasureKind::pbs;
    double threshold = kDefaultThreshold;
    int l_max = kDefaultLMax;
    std::optional<std::uint64_t> shots;
    std::uint64_t seed = 0;
};

struct RunReport {
    OracleId oracle;
    MeasureKind measure;
    double p_d1;
    double p_d2;
    OamSorterResult oam;
    double survival;
    Verdict verdict;
    std::optional<ShotTally> shots;
    double output_fidelity_vs_expected;
    PhotonState output;
};

RunReport run(OracleId id, const RunParams& params = {});

}  // namespace oamsim
