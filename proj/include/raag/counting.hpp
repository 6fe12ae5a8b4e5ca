#pragma once

#include "automaton.hpp"
#include "contraction.hpp"

namespace raag {

struct GenericityMode {
    bool exhaustive = true;
    int samples = 0;
    uint64_t seed = 0;

    static GenericityMode make_exhaustive() { return {}; }
    static GenericityMode make_sampled(int samples, uint64_t seed) {
        if (samples <= 0) throw usage_error("GenericityMode: samples must be positive");
        return {false, samples, seed};
    }
};

// One ball radius of the genericity experiment. In exhaustive mode
// sampled == ball_size and fraction is an exact rational.
struct GenericityRow {
    int n = 0;
    BigInt ball_size;
    int64_t sampled = 0;
    int64_t contracting = 0;
    int D = 0;
    int R = 0;
    int m = 0;
    int geodesic_cap = 0;
    bool exhaustive = true;
    uint64_t seed = 0;

    double fraction() const {
        return sampled > 0 ? (double)contracting / (double)sampled : 0.0;
    }
};

namespace detail {

// One uniform draw from the radius-r sphere using a precomputed path-count
// table (table[k][s] = suffixes of length k from state s).
inline Element sample_one(const GeodesicAutomaton& A,
                          const std::vector<std::vector<BigInt>>& table, int r,
                          SplitMix64& rng) {
    const GroupModel& G = A.model();
    int state = A.start();
    std::string word;
    for (int k = r; k > 0; --k) {
        BigInt pick = rng.big_below(table[k][state]);
        for (int y = 0; y < G.num_letters(); ++y) {
            int t = A.next(state, (char)y);
            if (t < 0) continue;
            const BigInt& ways = table[k - 1][t];
            if (pick < ways) {
                word.push_back((char)y);
                state = t;
                break;
            }
            pick -= ways;
        }
    }
    return G.from_code(word);
}

}  // namespace detail

// Fraction of D-contracting elements per ball B(n), via classify_element at
// scale (p, m). The identity and anything elliptic at scale count as
// non-contracting but stay in the denominator.
inline std::vector<GenericityRow> genericity_experiment(
    const GroupModel& G, const std::vector<int>& ns, const ContractionParams& p, int m,
    const GenericityMode& mode, const BigInt& exhaustive_limit = BigInt(1000000)) {
    if (ns.empty()) throw usage_error("genericity_experiment: empty radius list");
    for (size_t i = 0; i + 1 < ns.size(); ++i)
        if (ns[i] >= ns[i + 1])
            throw usage_error("genericity_experiment: radii must be strictly increasing");
    if (ns.front() < 0) throw usage_error("genericity_experiment: negative radius");
    p.validate();
    GeodesicAutomaton A = GeodesicAutomaton::build(G);
    int max_n = ns.back();
    std::vector<BigInt> sphere_sizes = A.sphere_counts(max_n);
    std::vector<BigInt> ball_sizes(max_n + 1);
    BigInt acc = 0;
    for (int r = 0; r <= max_n; ++r) {
        acc += sphere_sizes[r];
        ball_sizes[r] = acc;
    }

    auto classify_contracting = [&](const Element& g) {
        return classify_element(G, g, p, m).kind == ElementClass::contracting;
    };
    auto base_row = [&](int n) {
        GenericityRow row;
        row.n = n;
        row.ball_size = ball_sizes[n];
        row.D = p.D;
        row.R = p.R;
        row.m = m;
        row.geodesic_cap = p.geodesic_cap;
        row.exhaustive = mode.exhaustive;
        row.seed = mode.seed;
        return row;
    };

    std::vector<GenericityRow> rows;
    if (mode.exhaustive) {
        for (int n : ns)
            if (ball_sizes[n] > exhaustive_limit) {
                int ok = n - 1;
                while (ok >= 0 && ball_sizes[ok] > exhaustive_limit) --ok;
                throw resource_error("genericity_experiment: exhaustive ball exceeds limit at n = " +
                                         std::to_string(n),
                                     ok);
            }
        // walk the spheres once; every ball is a prefix of the next
        int64_t contracting = 0, seen = 0;
        size_t next_row = 0;
        for (int r = 0; r <= max_n && next_row < ns.size(); ++r) {
            for (const Element& g : A.sphere_elements(r)) {
                ++seen;
                if (classify_contracting(g)) ++contracting;
            }
            while (next_row < ns.size() && ns[next_row] == r) {
                GenericityRow row = base_row(r);
                row.sampled = seen;
                row.contracting = contracting;
                rows.push_back(std::move(row));
                ++next_row;
            }
        }
        return rows;
    }

    auto table = A.path_count_table(max_n);
    for (int n : ns) {
        GenericityRow row = base_row(n);
        uint64_t nseed = SplitMix64::stream(mode.seed, (uint64_t)n).next();
        for (int i = 0; i < mode.samples; ++i) {
            SplitMix64 rng = SplitMix64::stream(nseed, (uint64_t)i);
            // uniform over the ball: radius weighted by sphere size
            BigInt pick = rng.big_below(ball_sizes[n]);
            int r = 0;
            while (pick >= sphere_sizes[r]) {
                pick -= sphere_sizes[r];
                ++r;
            }
            Element g = detail::sample_one(A, table, r, rng);
            ++row.sampled;
            if (classify_contracting(g)) ++row.contracting;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace raag
