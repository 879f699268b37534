#include "dpgeom/harness.hpp"

#include <cmath>

#include "dpgeom/errors.hpp"

namespace dpgeom {

namespace {

constexpr int kRandomCandidates = 3;
constexpr int kWidthDirections = 64;

struct Accumulator {
    long count = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double v) {
        ++count;
        const double delta = v - mean;
        mean += delta / static_cast<double>(count);
        m2 += delta * (v - mean);
    }

    // RMS and its delta-method standard error from the squared errors.
    std::pair<double, double> rms() const {
        const double rms = std::sqrt(std::max(mean, 0.0));
        if (count < 2 || rms == 0.0) return {rms, 0.0};
        const double se_sq = std::sqrt(m2 / static_cast<double>(count - 1) / static_cast<double>(count));
        return {rms, se_sq / (2.0 * rms)};
    }
};

PointDatabase repeated(const Vector& x, long n) {
    PointDatabase db{Matrix(x.size(), n)};
    for (long i = 0; i < n; ++i) db.points.col(i) = x;
    return db;
}

void check_trials(long n, long trials) {
    if (n < 1) throw DomainError("measure_error: n must be >= 1");
    if (trials < 1) throw DomainError("measure_error: trials must be >= 1");
}

}  // namespace

std::string to_string(Adversary adversary) {
    switch (adversary) {
        case Adversary::single_vertex:
            return "single-vertex";
        case Adversary::random_vertices:
            return "random-vertices";
        case Adversary::max_width_direction:
            return "max-width-direction";
    }
    return "unknown";
}

Adversary adversary_from_string(const std::string& name) {
    if (name == "single-vertex") return Adversary::single_vertex;
    if (name == "random-vertices") return Adversary::random_vertices;
    if (name == "max-width-direction") return Adversary::max_width_direction;
    throw InputError("unknown adversary '" + name + "'");
}

std::vector<PointDatabase> adversary_databases(const ConvexBody& body, long n, Adversary adversary,
                                               std::uint64_t seed) {
    const Index m = body.dim();
    std::vector<PointDatabase> out;
    switch (adversary) {
        case Adversary::single_vertex:
            out.push_back(repeated(lp_vertex_oracle(body, Vector::Unit(m, 0)), n));
            break;
        case Adversary::random_vertices:
            for (int c = 0; c < kRandomCandidates; ++c) {
                Engine eng = make_engine(seed, {0xadULL, static_cast<std::uint64_t>(c)});
                PointDatabase db{Matrix(m, n)};
                for (long i = 0; i < n; ++i) db.points.col(i) = lp_vertex_oracle(body, standard_normal(eng, m));
                out.push_back(std::move(db));
            }
            break;
        case Adversary::max_width_direction: {
            // Farthest point found along sampled unit directions, used both as
            // a constant database and as an alternating +-x database.
            Engine eng = make_engine(seed, {0xa0ULL});
            Vector best = lp_vertex_oracle(body, Vector::Unit(m, 0));
            for (int k = 0; k < kWidthDirections; ++k) {
                Vector u = standard_normal(eng, m);
                u.normalize();
                const Vector x = lp_vertex_oracle(body, u);
                if (x.norm() > best.norm()) best = x;
            }
            out.push_back(repeated(best, n));
            PointDatabase alt = repeated(best, n);
            for (long i = 1; i < n; i += 2) alt.points.col(i) = -best;
            out.push_back(std::move(alt));
            break;
        }
    }
    return out;
}

std::vector<ElementDatabase> adversary_databases(const Workload& workload, long n,
                                                 Adversary adversary, std::uint64_t seed) {
    const auto count = static_cast<std::size_t>(n);
    std::vector<ElementDatabase> out;
    switch (adversary) {
        case Adversary::single_vertex:
            out.push_back(ElementDatabase{std::vector<Index>(count, 0)});
            break;
        case Adversary::random_vertices:
            for (int c = 0; c < kRandomCandidates; ++c) {
                Engine eng = make_engine(seed, {0xadULL, static_cast<std::uint64_t>(c)});
                std::uniform_int_distribution<Index> pick(0, workload.universe_size() - 1);
                ElementDatabase db;
                for (std::size_t i = 0; i < count; ++i) db.elements.push_back(pick(eng));
                out.push_back(std::move(db));
            }
            break;
        case Adversary::max_width_direction: {
            Index best = 0;
            workload.matrix().colwise().norm().maxCoeff(&best);
            out.push_back(ElementDatabase{std::vector<Index>(count, best)});
            break;
        }
    }
    return out;
}

ErrorEstimate measure_error(const ConvexBody& body, const MeanPointAlgorithm& algorithm, long n,
                            long trials, Adversary adversary, std::uint64_t seed) {
    check_trials(n, trials);
    const auto candidates = adversary_databases(body, n, adversary, seed);
    ErrorEstimate best;
    best.trials = trials;
    best.adversary = adversary;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
        const Vector mean = candidates[c].mean();
        Accumulator acc;
        for (long t = 0; t < trials; ++t) {
            const auto trial_seed = derive_seed(seed, {static_cast<std::uint64_t>(c), static_cast<std::uint64_t>(t)});
            acc.add((algorithm(candidates[c], trial_seed) - mean).squaredNorm());
        }
        const auto [rms, se] = acc.rms();
        if (c == 0 || rms > best.rms_error) {
            best.rms_error = rms;
            best.std_error = se;
            best.worst_candidate = c;
        }
    }
    return best;
}

ErrorEstimate measure_error(const Workload& workload, const QueryReleaseAlgorithm& algorithm,
                            long n, long trials, Adversary adversary, std::uint64_t seed) {
    check_trials(n, trials);
    const auto candidates = adversary_databases(workload, n, adversary, seed);
    const double m = static_cast<double>(workload.queries());
    ErrorEstimate best;
    best.trials = trials;
    best.adversary = adversary;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
        const Vector truth = evaluate(workload, candidates[c]);
        Accumulator acc;
        for (long t = 0; t < trials; ++t) {
            const auto trial_seed = derive_seed(seed, {static_cast<std::uint64_t>(c), static_cast<std::uint64_t>(t)});
            acc.add((algorithm(candidates[c], trial_seed) - truth).squaredNorm() / m);
        }
        const auto [rms, se] = acc.rms();
        if (c == 0 || rms > best.rms_error) {
            best.rms_error = rms;
            best.std_error = se;
            best.worst_candidate = c;
        }
    }
    return best;
}

SampleComplexity sample_complexity_search(const std::function<double(long)>& error_at, double alpha,
                                          long cap) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("sample_complexity_search: alpha must lie in (0, 1)");
    SampleComplexity out;
    auto probe = [&](long n) {
        ++out.probes;
        return error_at(n);
    };

    long lo = 0;  // largest n known to fail (0: none probed)
    double lo_err = kInfinity;
    long hi = 1;
    double hi_err = probe(hi);
    while (hi_err > alpha) {
        lo = hi;
        lo_err = hi_err;
        if (hi > cap / 2) {
            out.bounded = false;
            out.n = hi;
            out.error_at_n = hi_err;
            return out;
        }
        hi *= 2;
        hi_err = probe(hi);
    }
    while (hi - lo > 1) {
        const long mid = lo + (hi - lo) / 2;
        const double err = probe(mid);
        if (err <= alpha) {
            hi = mid;
            hi_err = err;
        } else {
            lo = mid;
            lo_err = err;
        }
    }
    out.bounded = true;
    out.n = hi;
    out.error_at_n = hi_err;
    out.error_below = lo == hi - 1 ? lo_err : kInfinity;
    return out;
}

SampleComplexity sample_complexity_search(const ConvexBody& body, const MeanPointAlgorithm& algorithm,
                                          double alpha, long trials, Adversary adversary,
                                          std::uint64_t seed, long cap) {
    return sample_complexity_search(
        [&](long n) { return measure_error(body, algorithm, n, trials, adversary, seed).rms_error; },
        alpha, cap);
}

}  // namespace dpgeom
