#include "glyphlab/annealer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "glyphlab/kernels.hpp"

namespace glyphlab {

namespace {

BoundingBox shifted_box(const BoundingBox& box, const Layout& layout, const AnnealConfig& config,
                        double temperature, Rng& rng)
{
    const double t = std::max(0.0, temperature);
    const double reach_x = config.max_shift_fraction * layout.canvas_width * t;
    const double reach_y = config.max_shift_fraction * layout.canvas_height * t;
    const auto dx = static_cast<int>(std::lround(rng.uniform(-reach_x, reach_x)));
    const auto dy = static_cast<int>(std::lround(rng.uniform(-reach_y, reach_y)));
    return clamp_to_canvas(box.translated(dx, dy), layout);
}

double energy_of(std::int64_t numerator, const Layout& layout)
{
    return numerator == 0 ? 0.0 : static_cast<double>(numerator) / static_cast<double>(layout.canvas_area());
}

} // namespace

void AnnealConfig::validate() const
{
    if (!(initial_temperature > 0.0)) {
        throw std::invalid_argument("initial_temperature must be > 0");
    }
    if (!(cooling_rate >= 0.0)) {
        throw std::invalid_argument("cooling_rate must be >= 0");
    }
    if (max_iterations < 0) {
        throw std::invalid_argument("max_iterations must be >= 0");
    }
    if (!(max_shift_fraction > 0.0 && max_shift_fraction <= 1.0)) {
        throw std::invalid_argument("max_shift_fraction must be in (0, 1]");
    }
}

double temperature_at(const AnnealConfig& config, int iteration)
{
    return std::max(0.0, config.initial_temperature - iteration * config.cooling_rate);
}

double acceptance_probability(double energy_old, double energy_new, double temperature)
{
    if (temperature <= 0.0) {
        return energy_new < energy_old ? 1.0 : 0.0;
    }
    return std::exp(-(energy_new - energy_old) / temperature);
}

Layout random_adjustment(const Layout& layout, const AnnealConfig& config, double temperature, Rng& rng)
{
    Layout next = layout;
    if (next.entries.empty()) {
        return next;
    }
    if (config.move_all_boxes) {
        for (auto& entry : next.entries) {
            entry.box = shifted_box(entry.box, layout, config, temperature, rng);
        }
        return next;
    }
    const auto index = static_cast<std::size_t>(rng.below(next.entries.size()));
    next.entries[index].box = shifted_box(next.entries[index].box, layout, config, temperature, rng);
    return next;
}

AnnealResult optimize(const Layout& layout, const AnnealConfig& config)
{
    validate(layout);
    config.validate();

    Rng rng(config.seed);
    Layout current = layout;
    kernels::BoxLanes lanes(current);
    std::int64_t numerator = weighted_overlap_numerator(current);

    AnnealResult result;
    AnnealTrace& trace = result.trace;
    trace.initial_energy = energy_of(numerator, current);
    std::int64_t best_numerator = numerator;
    Layout best = current;

    for (int iter = 0; numerator > 0 && iter < config.max_iterations; ++iter) {
        const double temperature = temperature_at(config, iter);
        std::int64_t proposed_numerator = 0;
        Layout proposal;
        if (config.move_all_boxes) {
            proposal = random_adjustment(current, config, temperature, rng);
            proposed_numerator = weighted_overlap_numerator(proposal);
        } else {
            // same draws as random_adjustment, with an incremental energy update
            const auto index = static_cast<std::size_t>(rng.below(current.entries.size()));
            const BoundingBox old_box = current.entries[index].box;
            const BoundingBox new_box = shifted_box(old_box, current, config, temperature, rng);
            proposed_numerator = numerator - kernels::overlap_row(lanes, old_box, index).weighted +
                                 kernels::overlap_row(lanes, new_box, index).weighted;
            proposal = current;
            proposal.entries[index].box = new_box;
        }

        const double energy_before = energy_of(numerator, current);
        const double energy_after = energy_of(proposed_numerator, current);
        const double p = acceptance_probability(energy_before, energy_after, temperature);
        const bool accepted = accept_move(p, rng.uniform01());
        trace.steps.push_back({iter, temperature, energy_before, energy_after, accepted});

        if (accepted) {
            current = std::move(proposal);
            lanes = kernels::BoxLanes(current);
            numerator = proposed_numerator;
            if (numerator < best_numerator) {
                best_numerator = numerator;
                best = current;
            }
        }
    }

    trace.final_layout = current;
    trace.best_layout = best;
    trace.best_energy = energy_of(best_numerator, best);
    result.layout = std::move(best);
    return result;
}

} // namespace glyphlab
