#pragma once

#include <cmath>
#include <map>
#include <optional>

#include "automaton.hpp"
#include "contraction.hpp"

namespace raag {

// Vertex-induced (special) subgroup H of a RAAG: the subgroup generated by a
// nonempty set of vertices. Membership is a normal-form letter check, and
// canonical geodesics between members stay inside H.
struct SpecialSubgroup {
    std::vector<int> vertices;   // sorted defining-graph vertex indices
    uint64_t letter_mask = 0;    // bit per letter byte code

    bool contains_letter(char c) const { return letter_mask >> (unsigned char)c & 1; }

    bool contains(const Element& x) const {
        for (char c : x.code())
            if (!contains_letter(c)) return false;
        return true;
    }
};

inline SpecialSubgroup special_subgroup(const GroupModel& G,
                                        const std::vector<std::string>& vertex_names) {
    if (vertex_names.empty()) throw usage_error("special_subgroup: empty vertex set");
    SpecialSubgroup H;
    for (const std::string& name : vertex_names) {
        const auto& names = G.graph().vertex_names;
        auto it = std::find(names.begin(), names.end(), name);
        if (it == names.end())
            throw usage_error("special_subgroup: unknown vertex '" + name + "'");
        int v = (int)(it - names.begin());
        if (std::find(H.vertices.begin(), H.vertices.end(), v) != H.vertices.end())
            throw usage_error("special_subgroup: duplicate vertex '" + name + "'");
        H.vertices.push_back(v);
        char pos = G.encode(Letter{v, +1});
        H.letter_mask |= 1ull << (unsigned char)pos;
        H.letter_mask |= 1ull << (unsigned char)(pos ^ 1);
    }
    std::sort(H.vertices.begin(), H.vertices.end());
    return H;
}

namespace detail {

// Letters that can be shuffled to the front of a normal form.
inline void front_letters(const GroupModel& G, const std::string& w, std::vector<int>& out) {
    out.clear();
    for (size_t i = 0; i < w.size(); ++i) {
        bool front = true;
        for (size_t k = 0; k < i && front; ++k) front = G.independent(w[k], w[i]);
        if (front) out.push_back((int)i);
    }
}

// Strips the maximal H-prefix: repeatedly deletes a front-shuffleable letter
// of H until none remains. The result is the shortest element of the left
// H-orbit Hw, so its length is d(w, H) (verified against brute force).
inline std::string strip_subgroup_prefix(const GroupModel& G, std::string w,
                                         const SpecialSubgroup& H) {
    std::vector<int> fronts;
    for (;;) {
        front_letters(G, w, fronts);
        bool removed = false;
        for (int i : fronts)
            if (H.contains_letter(w[i])) {
                w.erase((size_t)i, 1);
                removed = true;
                break;
            }
        if (!removed) return w;
    }
}

// Shortest representative of the coset xH, by stripping the maximal H-suffix.
inline Element coset_key(const GroupModel& G, const Element& x, const SpecialSubgroup& H) {
    // suffix letters of x are front letters of x^-1
    Element inv = G.invert(x);
    std::string stripped = strip_subgroup_prefix(G, inv.code(), H);
    return G.invert(G.from_code(stripped));
}

}  // namespace detail

// min_{h in H} d(x, z*h) if it is <= K, nothing otherwise. Exact: the minimum
// equals the length of z^-1 x with its maximal H-prefix stripped.
inline std::optional<int> coset_distance(const GroupModel& G, const Element& x, const Element& z,
                                         const SpecialSubgroup& H, int K) {
    if (K < 0) throw usage_error("coset_distance: negative bound");
    Element w = G.multiply(G.invert(z), x);
    int d = (int)detail::strip_subgroup_prefix(G, w.code(), H).size();
    if (d <= K) return d;
    return std::nullopt;
}

struct ExcursionWitness {
    Element coset_rep;  // shortest representative of the attaining coset
    int i = 0;          // indices on the examined path realizing the diameter
    int j = 0;
};

struct ExcursionReport {
    Element g;
    int K = 0;
    int excursion = 0;
    ExcursionWitness witness;
    int64_t geodesics_examined = 0;
    bool truncated = false;  // value is a lower bound when set
};

// Largest diameter of the set of path points lying within K of a single coset
// t*H. Cosets are enumerated from the K-balls around the path points, which
// is exhaustive: a coset meeting the K-neighborhood of the path has a point
// within K of some path point.
inline std::pair<int, ExcursionWitness> excursion_of_path(const GroupModel& G,
                                                          const PathSegment& gamma,
                                                          const SpecialSubgroup& H, int K,
                                                          const BallIndex* ball_K = nullptr) {
    if (gamma.points.empty()) throw usage_error("excursion_of_path: empty path");
    if (K < 0) throw usage_error("excursion_of_path: negative K");
    int P = gamma.num_points();
    int best = 0;
    ExcursionWitness wit;
    auto sweep_members = [&](const Element& z, const std::vector<int>& members) {
        for (size_t a = 0; a < members.size(); ++a)
            for (size_t b = a; b < members.size(); ++b) {
                int d = distance(G, gamma.points[members[a]], gamma.points[members[b]]);
                if (d > best) {
                    best = d;
                    wit = {z, members[a], members[b]};
                }
            }
    };
    if (K == 0) {
        // membership in zH at K = 0 is coset-key equality, so group directly
        std::map<std::string, std::pair<Element, std::vector<int>>> groups;
        for (int i = 0; i < P; ++i) {
            Element key = detail::coset_key(G, gamma.points[i], H);
            auto& slot = groups[key.code()];
            slot.first = key;
            slot.second.push_back(i);
        }
        wit.coset_rep = groups.begin()->second.first;
        for (const auto& [code, entry] : groups) sweep_members(entry.first, entry.second);
        return {best, wit};
    }
    BallIndex local;
    if (!ball_K || ball_K->radius < K) {
        GeodesicAutomaton A = GeodesicAutomaton::build(G);
        local = enumerate_ball(A, K);
        ball_K = &local;
    }
    std::map<std::string, Element> reps;  // coset key code -> representative
    for (const Element& p : gamma.points)
        for (int r = 0; r <= K; ++r)
            for (const Element& w : ball_K->spheres[r]) {
                Element key = detail::coset_key(G, G.multiply(p, w), H);
                reps.emplace(key.code(), key);
            }
    wit.coset_rep = reps.begin()->second;
    std::vector<int> members;
    for (const auto& [code, z] : reps) {
        members.clear();
        for (int i = 0; i < P; ++i)
            if (coset_distance(G, gamma.points[i], z, H, K)) members.push_back(i);
        sweep_members(z, members);
    }
    return {best, wit};
}

// Maximum excursion over the geodesics from the identity to g, enumerated
// lexicographically up to the cap (the canonical geodesic is the first).
inline ExcursionReport excursion_of_element(const GroupModel& G, const Element& g,
                                            const SpecialSubgroup& H, int K, int cap,
                                            const BallIndex* ball_K = nullptr) {
    if (cap <= 0) throw usage_error("excursion_of_element: cap must be positive");
    ExcursionReport rep;
    rep.g = g;
    rep.K = K;
    GeodesicEnumeration all = enumerate_geodesics(G, G.identity(), g, cap);
    rep.truncated = all.truncated;
    rep.geodesics_examined = (int64_t)all.geodesics.size();
    rep.excursion = -1;
    for (const PathSegment& gamma : all.geodesics) {
        auto [value, wit] = excursion_of_path(G, gamma, H, K, ball_K);
        if (value > rep.excursion) {
            rep.excursion = value;
            rep.witness = wit;
        }
    }
    return rep;
}

struct IndependenceProbe {
    int value = 0;        // max over cosets of diam of the axis projection
    Element coset_rep;    // attaining coset
    int r = 0;
    int m = 0;
};

// max over t in B(r) of diam pi_axis(f,m)(tH intersected with B(r)).
inline IndependenceProbe strong_independence_probe(const GroupModel& G, const Element& f,
                                                   const SpecialSubgroup& H, int r, int m,
                                                   const BallIndex* ball_r = nullptr) {
    AxisApprox ax = axis(G, f, m);
    if (ax.elliptic) throw usage_error("strong_independence_probe: elliptic at this scale");
    BallIndex local;
    if (!ball_r || ball_r->radius < r) {
        GeodesicAutomaton A = GeodesicAutomaton::build(G);
        local = enumerate_ball(A, r);
        ball_r = &local;
    }
    std::map<std::string, std::pair<Element, std::vector<Element>>> cosets;
    for (int rad = 0; rad <= r; ++rad)
        for (const Element& t : ball_r->spheres[rad]) {
            Element key = detail::coset_key(G, t, H);
            auto& slot = cosets[key.code()];
            slot.first = key;
            slot.second.push_back(t);
        }
    IndependenceProbe probe;
    probe.r = r;
    probe.m = m;
    probe.coset_rep = G.identity();
    for (const auto& [code, entry] : cosets) {
        int d = projection_diameter(G, ax.path, entry.second, {});
        if (d > probe.value) {
            probe.value = d;
            probe.coset_rep = entry.first;
        }
    }
    return probe;
}

struct LoglawRow {
    int n = 0;
    std::vector<int> excursions;  // sorted ascending
    int min = 0, q1 = 0, median = 0, q3 = 0, max = 0;
    bool any_truncated = false;
    double covered_fraction = 0.0;  // fraction with E/log n inside [C1, C2]
    // per-sample records in draw order, for row-level artifacts
    std::vector<std::string> sample_words;
    std::vector<int> sample_excursions;
    std::vector<bool> sample_truncated;
};

struct LoglawResult {
    std::vector<LoglawRow> rows;
    double C1 = 0.0;  // half the minimum ratio at the largest n
    double C2 = 0.0;  // twice the maximum ratio at the largest n
    int samples = 0;
    int K = 0;
    int cap = 0;
    uint64_t seed = 0;
};

// Per-radius excursion statistics for uniform sphere samples, with the
// [C1, C2] band fitted at the largest radius. Ratios use natural log.
inline LoglawResult loglaw_experiment(const GroupModel& G, const std::vector<int>& ns,
                                      int samples, const SpecialSubgroup& H, int K,
                                      uint64_t seed, int cap) {
    if (ns.empty()) throw usage_error("loglaw_experiment: empty radius list");
    if (samples <= 0) throw usage_error("loglaw_experiment: samples must be positive");
    for (int n : ns)
        if (n < 2) throw usage_error("loglaw_experiment: radii must be at least 2");
    GeodesicAutomaton A = GeodesicAutomaton::build(G);
    BallIndex ball_K;
    if (K > 0) ball_K = enumerate_ball(A, K);
    LoglawResult res;
    res.samples = samples;
    res.K = K;
    res.cap = cap;
    res.seed = seed;
    for (int n : ns) {
        LoglawRow row;
        row.n = n;
        uint64_t nseed = SplitMix64::stream(seed, (uint64_t)n).next();
        for (const Element& g : sample_sphere_uniform(A, n, samples, nseed)) {
            ExcursionReport rep =
                excursion_of_element(G, g, H, K, cap, K > 0 ? &ball_K : nullptr);
            row.excursions.push_back(rep.excursion);
            row.any_truncated = row.any_truncated || rep.truncated;
            row.sample_words.push_back(to_string(g));
            row.sample_excursions.push_back(rep.excursion);
            row.sample_truncated.push_back(rep.truncated);
        }
        std::sort(row.excursions.begin(), row.excursions.end());
        auto q = [&](double p) { return row.excursions[(size_t)(p * (samples - 1))]; };
        row.min = row.excursions.front();
        row.q1 = q(0.25);
        row.median = q(0.5);
        row.q3 = q(0.75);
        row.max = row.excursions.back();
        res.rows.push_back(std::move(row));
    }
    const LoglawRow& last = res.rows.back();
    double logn = std::log((double)last.n);
    res.C1 = 0.5 * last.min / logn;
    res.C2 = 2.0 * last.max / logn;
    for (LoglawRow& row : res.rows) {
        double ln = std::log((double)row.n);
        int covered = 0;
        for (int e : row.excursions) {
            double ratio = e / ln;
            if (ratio >= res.C1 && ratio <= res.C2) ++covered;
        }
        row.covered_fraction = (double)covered / samples;
    }
    return res;
}

}  // namespace raag
