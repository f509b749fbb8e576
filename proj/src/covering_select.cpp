#include <algorithm>
#include <numeric>

#include "sfc/covering.hpp"
#include "sfc/error.hpp"
#include "sfc/rng.hpp"

namespace sfc {

namespace {

// Small integer combinations: unit vectors first, then by L1 norm. Only primitive
// vectors whose first nonzero entry is positive (eta and -eta trace the same graph).
std::vector<Eigen::VectorXd> candidate_combinations(int n, int bound) {
    std::vector<std::vector<int>> all;
    std::vector<int> c(n, -bound);
    while (true) {
        int first = 0;
        while (first < n && c[first] == 0) ++first;
        if (first < n && c[first] > 0) {
            int g = 0;
            for (int x : c) g = std::gcd(g, std::abs(x));
            if (g == 1) all.push_back(c);
        }
        int i = n - 1;
        while (i >= 0 && c[i] == bound) c[i--] = -bound;
        if (i < 0) break;
        ++c[i];
    }
    auto l1 = [](const std::vector<int>& v) {
        int s = 0;
        for (int x : v) s += std::abs(x);
        return s;
    };
    std::stable_sort(all.begin(), all.end(), [&](const auto& a, const auto& b) {
        if (l1(a) != l1(b)) return l1(a) < l1(b);
        return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
    });
    std::vector<Eigen::VectorXd> out;
    for (const auto& v : all) {
        Eigen::VectorXd e(n);
        for (int i = 0; i < n; ++i) e[i] = v[i];
        out.push_back(e);
    }
    return out;
}

} // namespace

CoveringResult build_covering(const TriMesh& mesh, const CutGraph& cut, const HodgeBasis& basis, std::uint64_t seed,
                              int max_attempts) {
    const int g = genus(mesh);
    if (g < 1) throw Error(ErrorKind::GenusZero, "covering needs genus at least 1");
    const int n = basis.size();

    std::vector<Eigen::VectorXd> candidates = candidate_combinations(n, 2);
    Rng rng = Rng::substream(seed, "form-combo");
    while (static_cast<int>(candidates.size()) < max_attempts) {
        Eigen::VectorXd e(n);
        for (int i = 0; i < n; ++i) e[i] = static_cast<double>(rng.index(7)) - 3.0;
        if (e.cwiseAbs().sum() > 0) candidates.push_back(e);
    }

    std::string last = "no candidate tried";
    ErrorKind last_kind = ErrorKind::WrongZeroCount;
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        CoveringResult result;
        result.coefficients = candidates[attempt];
        result.attempts = attempt + 1;
        result.omega = rotated_form(basis, result.coefficients);
        try {
            result.chart = integrate(mesh, cut, result.omega);
            if (g == 1) {
                result.atlas = torus_atlas(mesh, result.omega);
                result.atlas.zeros.clear();
                return result;
            }
            const std::vector<ZeroPoint> zeros = find_zeros(mesh, result.omega);
            result.graph = trace_critical(mesh, result.omega, zeros, result.chart.diameter);
            result.atlas = segment_handles(mesh, result.omega, result.graph, g);
            return result;
        } catch (const Error& e) {
            switch (e.kind()) {
            case ErrorKind::WrongZeroCount:
            case ErrorKind::TraceEscape:
            case ErrorKind::PathDependence:
            case ErrorKind::WrongComponentCount:
            case ErrorKind::NonHorizontalSlit:
                last = e.what();
                last_kind = e.kind();
                break;
            default:
                throw;
            }
        }
    }
    throw Error(last_kind, "no form in " + std::to_string(max_attempts) + " attempts gave a covering; last: " + last);
}

} // namespace sfc
