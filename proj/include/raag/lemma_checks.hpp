#pragma once

#include <functional>
#include <sstream>

#include "automaton.hpp"
#include "contraction.hpp"

namespace raag {

// Scale at which check instances are generated and segments are vetted for
// the contraction property.
struct LemmaCheckConfig {
    int R = 4;
    std::vector<int> D_grid = {1, 2, 4, 8};
    int geodesic_cap = 50;
    int segment_max = 6;  // generated segment lengths are in [2, segment_max]
    int offset_max = 3;   // test points sit within this distance of the segment
};

// Empirical verification of one asserted inequality over generated instances.
// observed is the check-specific maximal constant; when the statement pins a
// bound, observed is normalized so that values <= 0 satisfy it and bound = 0;
// existence statements (constant unquantified) report the raw maximum with
// bound = -1 and can have no violations.
struct LemmaCheckReport {
    std::string check;
    int trials = 0;  // instances evaluated (attempts failing preconditions are skipped)
    int violations = 0;
    int observed = 0;
    int bound = -1;
    std::string note;  // description of the extremal or first violating instance
};

namespace detail {

inline int set_hausdorff(const GroupModel& G, const std::vector<Element>& a,
                         const std::vector<Element>& b) {
    if (a.empty() || b.empty()) throw usage_error("set_hausdorff: empty set");
    auto one_sided = [&](const std::vector<Element>& from, const std::vector<Element>& to) {
        int worst = 0;
        for (const Element& p : from) {
            int best = -1;
            for (const Element& q : to) {
                int d = distance(G, p, q);
                if (best < 0 || d < best) best = d;
            }
            worst = std::max(worst, best);
        }
        return worst;
    };
    return std::max(one_sided(a, b), one_sided(b, a));
}

inline PathSegment subpath(const PathSegment& p, int i, int j) {
    PathSegment out;
    out.kind = PathSegment::Kind::geodesic;
    out.points.assign(p.points.begin() + i, p.points.begin() + j + 1);
    return out;
}

inline std::vector<Element> projection_points(const GroupModel& G, const Element& x,
                                              const PathSegment& gamma) {
    std::vector<Element> out;
    for (int idx : project(G, x, gamma).projections) out.push_back(gamma.points[idx]);
    return out;
}

// diam(pt u pi_gamma(x))
inline int point_vs_projection(const GroupModel& G, const Element& pt, const Element& x,
                               const PathSegment& gamma) {
    return projection_diameter(G, gamma, {pt}, {x});
}

// Alignment constant of the triple (x, gamma, y): the least C - 1 fails, i.e.
// max of the two endpoint projection spreads.
inline int alignment_constant(const GroupModel& G, const Element& x, const PathSegment& gamma,
                              const Element& y) {
    return std::max(projection_diameter(G, gamma, {gamma.front()}, {x}),
                    projection_diameter(G, gamma, {gamma.back()}, {y}));
}

// One generated instance: a segment that passed the empirical contraction
// test at D_star, plus two points near it.
struct CheckInstance {
    PathSegment gamma;
    int D = 0;  // the D at which gamma passed
    Element x;
    Element y;
};

class InstanceGenerator {
public:
    InstanceGenerator(const GroupModel& G, const LemmaCheckConfig& cfg, uint64_t seed)
        : G_(G), cfg_(cfg), A_(GeodesicAutomaton::build(G)), seed_(seed) {}

    // may return no value when the attempt fails a precondition
    std::optional<CheckInstance> next() {
        SplitMix64 rng = SplitMix64::stream(seed_, attempt_++);
        int len = 2 + (int)rng.below((uint64_t)(cfg_.segment_max - 1));
        Element w = sample_sphere_uniform(A_, len, 1, rng.next())[0];
        CheckInstance inst;
        inst.gamma = canonical_geodesic(G_, G_.identity(), w);
        ContractionReport rep = empirical_contraction_constant(G_, inst.gamma, cfg_.R,
                                                               cfg_.D_grid, cfg_.geodesic_cap);
        if (!rep.D_star) return std::nullopt;
        inst.D = *rep.D_star;
        inst.x = nearby_point(inst.gamma, rng);
        inst.y = nearby_point(inst.gamma, rng);
        return inst;
    }

    Element nearby_point(const PathSegment& gamma, SplitMix64& rng) {
        const Element& base = gamma.points[rng.below((uint64_t)gamma.num_points())];
        int len = (int)rng.below((uint64_t)cfg_.offset_max + 1);
        if (len == 0) return base;
        return G_.multiply(base, sample_sphere_uniform(A_, len, 1, rng.next())[0]);
    }

    const GeodesicAutomaton& automaton() const { return A_; }

private:
    const GroupModel& G_;
    const LemmaCheckConfig& cfg_;
    GeodesicAutomaton A_;
    uint64_t seed_;
    uint64_t attempt_ = 0;
};

inline std::string describe(const CheckInstance& inst) {
    std::ostringstream os;
    os << "gamma=[" << to_string(inst.gamma.front()) << ".." << to_string(inst.gamma.back())
       << "] D=" << inst.D << " x=" << to_string(inst.x) << " y=" << to_string(inst.y);
    return os.str();
}

}  // namespace detail

// The two extreme geodesics from e to u^n v^n for commuting generators u, v:
// the u-first and the v-first staircases. width = their Hausdorff distance;
// a width >= n/2 certifies a non-thin bigon at that scale.
struct BigonReport {
    int n = 0;
    int width = 0;
    PathSegment lower;  // u-first
    PathSegment upper;  // v-first
};

inline BigonReport bigon_width(const GroupModel& G, const Element& u, const Element& v, int n) {
    if (n <= 0) throw usage_error("bigon_width: n must be positive");
    if (u.length() != 1 || v.length() != 1)
        throw usage_error("bigon_width: u and v must be single letters");
    if (!G.independent(u.code()[0], v.code()[0]))
        throw usage_error("bigon_width: u and v must commute");
    Element un = G.power(u, n), vn = G.power(v, n);
    Element corner = G.multiply(un, vn);
    auto staircase = [&](const Element& mid) {
        PathSegment first = canonical_geodesic(G, G.identity(), mid);
        PathSegment second = canonical_geodesic(G, mid, corner);
        for (int k = 1; k < second.num_points(); ++k) first.points.push_back(second.points[k]);
        return first;
    };
    BigonReport rep;
    rep.n = n;
    rep.lower = staircase(un);
    rep.upper = staircase(vn);
    if (!is_valid_path(G, rep.lower) || !is_valid_path(G, rep.upper) ||
        rep.lower.num_points() != 2 * n + 1 || rep.upper.num_points() != 2 * n + 1)
        throw usage_error("bigon_width: staircases are not geodesics (u, v do not span a flat)");
    rep.width = hausdorff_distance(G, rep.lower, rep.upper);
    return rep;
}

// Evaluates one statement of the projection/alignment tool chain on `trials`
// generated instances. Known checks:
//   projection-slack      d_gamma(x,y) - d(x,y) <= 4D           (bound 0)
//   bridge-subsegment     near-projection subsegment bounds      (bound 0)
//   neighborhood-geodesic [x,y] stays near gamma; min E observed (bound -1)
//   chain-subsegments     aligned triple -> fellow-travel const  (bound -1)
//   chain-converse        subsegment -> alignment constant       (bound -1)
//   endpoint-extension    inner alignment extends outward        (bound -1)
inline LemmaCheckReport lemma_check(const GroupModel& G, const std::string& check, int trials,
                                    uint64_t seed, const LemmaCheckConfig& cfg = {}) {
    if (trials <= 0) throw usage_error("lemma_check: trials must be positive");
    LemmaCheckReport rep;
    rep.check = check;
    detail::InstanceGenerator gen(G, cfg, seed);

    // evaluate(inst) -> (observed value, satisfied flag) or nothing if the
    // instance fails the statement's hypotheses
    std::function<std::optional<std::pair<int, bool>>(const detail::CheckInstance&)> evaluate;

    if (check == "projection-slack") {
        rep.bound = 0;
        evaluate = [&](const detail::CheckInstance& t) -> std::optional<std::pair<int, bool>> {
            int slack = projection_diameter(G, t.gamma, {t.x}, {t.y}) - distance(G, t.x, t.y);
            int v = slack - 4 * t.D;
            return std::make_pair(v, v <= 0);
        };
    } else if (check == "bridge-subsegment") {
        rep.bound = 0;
        evaluate = [&](const detail::CheckInstance& t) -> std::optional<std::pair<int, bool>> {
            if (projection_diameter(G, t.gamma, {t.x}, {t.y}) < t.D) return std::nullopt;
            PathSegment xy = canonical_geodesic(G, t.x, t.y);
            int lo = -1, hi = -1;
            std::vector<Element> proj_path;  // pi_gamma([x, y])
            for (int i = 0; i < xy.num_points(); ++i) {
                ProjectionResult pr = project(G, xy.points[i], t.gamma);
                for (int idx : pr.projections) proj_path.push_back(t.gamma.points[idx]);
                if (pr.distance <= t.D) {
                    if (lo < 0) lo = i;
                    hi = i;
                }
            }
            if (lo < 0) return std::nullopt;
            PathSegment bridge = detail::subpath(xy, lo, hi);
            int ends = std::max(detail::point_vs_projection(G, bridge.front(), t.x, t.gamma),
                                detail::point_vs_projection(G, bridge.back(), t.y, t.gamma));
            int mid = detail::set_hausdorff(G, bridge.points, proj_path);
            int outer = 0;
            for (int a : project(G, t.x, t.gamma).projections)
                for (int b : project(G, t.y, t.gamma).projections) {
                    PathSegment ab = detail::subpath(t.gamma, std::min(a, b), std::max(a, b));
                    outer = std::max(outer, detail::set_hausdorff(G, ab.points, bridge.points));
                }
            // strict < 2D on the ends, <= 4D and <= 10D on the bodies
            int v = std::max({ends - 2 * t.D + 1, mid - 4 * t.D, outer - 10 * t.D});
            return std::make_pair(v, v <= 0);
        };
    } else if (check == "neighborhood-geodesic") {
        evaluate = [&](const detail::CheckInstance& t) -> std::optional<std::pair<int, bool>> {
            if (project(G, t.x, t.gamma).distance > t.D) return std::nullopt;
            if (project(G, t.y, t.gamma).distance > t.D) return std::nullopt;
            PathSegment xy = canonical_geodesic(G, t.x, t.y);
            int radius = 0;
            for (const Element& p : xy.points)
                radius = std::max(radius, project(G, p, t.gamma).distance);
            ContractionReport r =
                empirical_contraction_constant(G, xy, cfg.R, cfg.D_grid, cfg.geodesic_cap);
            int dstar = r.D_star ? *r.D_star : cfg.D_grid.back() + 1;
            return std::make_pair(std::max(radius, dstar), true);
        };
    } else if (check == "chain-subsegments") {
        evaluate = [&](const detail::CheckInstance& t) -> std::optional<std::pair<int, bool>> {
            if (detail::alignment_constant(G, t.x, t.gamma, t.y) >= t.D) return std::nullopt;
            PathSegment xy = canonical_geodesic(G, t.x, t.y);
            auto closest = [&](const Element& target) {
                int best = -1, at = 0;
                for (int i = 0; i < xy.num_points(); ++i) {
                    int d = distance(G, xy.points[i], target);
                    if (best < 0 || d < best) {
                        best = d;
                        at = i;
                    }
                }
                return at;
            };
            int i = closest(t.gamma.front()), j = closest(t.gamma.back());
            if (i > j) std::swap(i, j);
            PathSegment sub = detail::subpath(xy, i, j);
            int e = std::max({distance(G, sub.front(), t.gamma.front()),
                              distance(G, sub.back(), t.gamma.back()),
                              hausdorff_distance(G, sub, t.gamma)});
            return std::make_pair(e, true);
        };
    } else if (check == "chain-converse") {
        evaluate = [&](const detail::CheckInstance& t) -> std::optional<std::pair<int, bool>> {
            PathSegment xy = canonical_geodesic(G, t.x, t.y);
            int P = xy.num_points();
            if (P < 3) return std::nullopt;
            // a subsegment 0-fellow-travels itself; measure the alignment of
            // (x, subsegment, y)
            PathSegment sub = detail::subpath(xy, 1, P - 2);
            int a = detail::alignment_constant(G, t.x, sub, t.y);
            return std::make_pair(a, true);
        };
    } else if (check == "endpoint-extension") {
        evaluate = [&](const detail::CheckInstance& t) -> std::optional<std::pair<int, bool>> {
            PathSegment xy = canonical_geodesic(G, t.x, t.y);
            int P = xy.num_points();
            if (P < 5) return std::nullopt;
            const Element& xin = xy.points[1];
            const Element& yin = xy.points[P - 2];
            int inner = detail::alignment_constant(G, xin, t.gamma, yin);
            if (inner >= t.D) return std::nullopt;
            int outer = detail::alignment_constant(G, t.x, t.gamma, t.y);
            return std::make_pair(outer, true);
        };
    } else {
        throw usage_error("lemma_check: unknown check '" + check + "'");
    }

    const int max_attempts = 200 * trials;
    int attempts = 0;
    bool first = true;
    while (rep.trials < trials) {
        if (++attempts > max_attempts)
            throw resource_error("lemma_check: could not generate enough instances", rep.trials);
        auto inst = gen.next();
        if (!inst) continue;
        auto r = evaluate(*inst);
        if (!r) continue;
        ++rep.trials;
        auto [value, ok] = *r;
        if (!ok) {
            ++rep.violations;
            if (rep.note.empty()) rep.note = "violation: " + detail::describe(*inst);
        }
        if (first || value > rep.observed) {
            rep.observed = value;
            if (rep.violations == 0) rep.note = "extremal: " + detail::describe(*inst);
            first = false;
        }
    }
    return rep;
}

}  // namespace raag
