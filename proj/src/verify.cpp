#include <algorithm>
#include <cmath>

#include "sfc/distsim.hpp"
#include "sfc/pipeline.hpp"

namespace sfc {

namespace {

Check make(std::string name, double value, std::string relation, double bound) {
    Check c{std::move(name), value, bound, relation, false, false};
    if (relation == "<=") c.pass = value <= bound;
    else if (relation == ">") c.pass = value > bound;
    else c.pass = value == bound;
    return c;
}

double offset_spread(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    const cplx shift = a[0] - b[0];
    double worst = 0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i] - shift));
    return worst;
}

} // namespace

std::vector<Check> curve_checks(const PipelineState& s, double slope, std::uint64_t seed) {
    const CoveringAtlas& atlas = s.covering.atlas;
    double perimeter = 0, eps = 1e300;
    for (const Handle& h : atlas.handles) {
        perimeter = std::max(perimeter, h.perimeter());
        eps = std::min(eps, hit_tolerance(h));
    }
    auto [handle, point] = default_start(atlas, s.mesh, slope, 0);
    const double k = choose_slope(atlas, handle, point, seed, slope);
    if (k != slope) std::tie(handle, point) = default_start(atlas, s.mesh, k, 0);
    const DenseCurve curve = trace_dense(atlas, k, handle, point, 200 * perimeter);

    std::vector<Check> out;
    out.push_back(make("curve_aperiodicity", aperiodicity(curve, atlas), ">", eps));
    const std::vector<GapSample> profile = density_profile(curve, atlas, 20, 8);
    double rise = 0, ratio = 0;
    for (std::size_t i = 1; i < profile.size(); ++i) {
        rise = std::max(rise, profile[i].max_gap - profile[i - 1].max_gap);
        if (i >= 2) ratio += profile[i].max_gap / profile[i - 1].max_gap;
    }
    out.push_back(make("density_profile_rise", rise, "<=", 0));
    out.push_back(make("density_halving_ratio", ratio / static_cast<double>(profile.size() - 2), "<=", 0.75));
    return out;
}

std::vector<Check> distributed_checks(const PipelineState& s) {
    std::vector<Check> out;
    const int seed = 0;
    const CutGraph locus = flood_cut_locus(s.mesh, seed);
    out.push_back(make("flood_cut_locus_euler", sliced_euler_characteristic(s.mesh, locus), "==", 1));
    out.push_back(make("flood_cut_locus_components", sliced_components(s.mesh, locus), "==", 1));

    double diff = 0;
    for (std::size_t i = 0; i < s.cohomology.size(); ++i) {
        const Diffusion d = diffuse_harmonic(s.mesh, s.hodge.weights, s.cohomology[i]);
        diff = std::max(diff, (d.form - s.hodge.harmonic[i]).cwiseAbs().maxCoeff());
    }
    out.push_back(make("diffusion_vs_harmonize", diff, "<=", 1e-6));

    const int root = s.mesh.num_vertices() / 2;
    const ComplexForm& omega = s.covering.omega;
    double spread = offset_spread(flood_integrate(s.mesh, s.cut, omega, root).value, s.covering.chart.value);
    spread = std::max(spread, offset_spread(flood_integrate(s.mesh, locus, omega, root).value,
                                            integrate(s.mesh, locus, omega, 0).value));
    out.push_back(make("flood_integration_offset", spread, "<=", 1e-8));
    return out;
}

} // namespace sfc
