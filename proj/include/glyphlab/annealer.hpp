#pragma once

#include <cstdint>
#include <vector>

#include "glyphlab/geometry.hpp"
#include "glyphlab/rng.hpp"

namespace glyphlab {

/// Annealing schedule and move parameters. Defaults:
/// T0 = 1.0, linear cooling of 1/3000 per pass, 70 passes.
struct AnnealConfig {
    double initial_temperature = 1.0;
    double cooling_rate = 1.0 / 3000.0;
    int max_iterations = 70;
    /// Largest shift of one move as a fraction of the canvas side, at T = 1.
    double max_shift_fraction = 0.05;
    std::uint64_t seed = 0;
    /// Move every box on each pass instead of one uniformly chosen box.
    bool move_all_boxes = false;

    /// Throws std::invalid_argument on out-of-range fields.
    void validate() const;
};

struct AnnealStep {
    int iteration = 0;
    double temperature = 0.0;
    double energy_before = 0.0;
    double energy_after = 0.0; ///< energy of the proposed layout
    bool accepted = false;
};

struct AnnealTrace {
    std::vector<AnnealStep> steps;
    double initial_energy = 0.0;
    Layout final_layout; ///< state when the loop stopped, possibly uphill
    Layout best_layout;
    double best_energy = 0.0;
};

struct AnnealResult {
    Layout layout; ///< best layout seen, including the input
    AnnealTrace trace;
};

/// max(0, T0 - iteration * cooling_rate).
double temperature_at(const AnnealConfig& config, int iteration);

/// exp(-(new - old) / T). Values above 1 mean the move is always taken.
/// For T <= 0 the rule degenerates to strict descent: 1 if new < old, else 0.
double acceptance_probability(double energy_old, double energy_new, double temperature);

/// The Metropolis test: take the move when a uniform draw in [0,1) is below p.
inline bool accept_move(double probability, double uniform_draw) { return uniform_draw < probability; }

/// Shift one uniformly chosen box (every box with move_all_boxes) by a
/// uniform offset in [-d, d] per axis, d = max_shift_fraction * side * T,
/// rounded to the pixel grid and clamped to the canvas.
Layout random_adjustment(const Layout& layout, const AnnealConfig& config, double temperature, Rng& rng);

/// Rearranges boxes to reduce weighted overlap energy. Stops as soon as the
/// current energy is zero or after max_iterations passes.
AnnealResult optimize(const Layout& layout, const AnnealConfig& config);

} // namespace glyphlab
