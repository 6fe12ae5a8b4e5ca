#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "automaton.hpp"
#include "group.hpp"

namespace raag {

// An edge path in the Cayley graph: consecutive points differ by one letter.
// kind distinguishes true geodesics from concatenations of geodesics (axis
// approximations).
struct PathSegment {
    enum class Kind { geodesic, concatenated };

    std::vector<Element> points;
    Kind kind = Kind::geodesic;

    int num_points() const { return (int)points.size(); }
    const Element& front() const { return points.front(); }
    const Element& back() const { return points.back(); }
};

inline int distance(const GroupModel& G, const Element& x, const Element& y) {
    return G.multiply(G.invert(x), y).length();
}

// The pinned representative of [x, y]: read the normal form of x^-1 y letter
// by letter starting from x.
inline PathSegment canonical_geodesic(const GroupModel& G, const Element& x, const Element& y) {
    PathSegment path;
    path.kind = PathSegment::Kind::geodesic;
    path.points.push_back(x);
    Element diff = G.multiply(G.invert(x), y);
    Element cur = x;
    for (char c : diff.code()) {
        cur = G.multiply_letter(cur, c);
        path.points.push_back(cur);
    }
    return path;
}

// Checks the PathSegment invariants; used by tests and debug assertions.
inline bool is_valid_path(const GroupModel& G, const PathSegment& p) {
    if (p.points.empty()) return false;
    for (size_t i = 0; i + 1 < p.points.size(); ++i)
        if (distance(G, p.points[i], p.points[i + 1]) != 1) return false;
    if (p.kind == PathSegment::Kind::geodesic &&
        (int)p.points.size() - 1 != distance(G, p.front(), p.back()))
        return false;
    return true;
}

// --- geodesic enumeration -------------------------------------------------

struct GeodesicEnumeration {
    std::vector<PathSegment> geodesics;  // lexicographic by letter sequence
    int64_t count = 0;                   // exact when !truncated
    bool truncated = false;
};

namespace detail {
inline void geodesic_dfs(const GroupModel& G, const Element& from, const Element& diff,
                         std::vector<char>& letters, GeodesicEnumeration& out, int cap) {
    if (out.truncated) return;
    if (diff.is_identity()) {
        if (out.count >= cap) {
            out.truncated = true;
            return;
        }
        PathSegment p;
        p.kind = PathSegment::Kind::geodesic;
        p.points.push_back(from);
        Element cur = from;
        for (char c : letters) {
            cur = G.multiply_letter(cur, c);
            p.points.push_back(cur);
        }
        out.geodesics.push_back(std::move(p));
        ++out.count;
        return;
    }
    for (int s = 0; s < G.num_letters(); ++s) {
        Element rest = G.multiply(G.invert(G.from_code(std::string(1, (char)s))), diff);
        if (rest.length() != diff.length() - 1) continue;
        letters.push_back((char)s);
        geodesic_dfs(G, from, rest, letters, out, cap);
        letters.pop_back();
        if (out.truncated) return;
    }
}
}  // namespace detail

// All geodesics from x to y in lexicographic order of their letter sequences,
// truncated at cap. First-letter recursion: s extends iff |s^-1 (x^-1 y)| =
// |x^-1 y| - 1.
inline GeodesicEnumeration enumerate_geodesics(const GroupModel& G, const Element& x,
                                               const Element& y, int cap) {
    if (cap <= 0) throw usage_error("enumerate_geodesics: cap must be positive");
    GeodesicEnumeration out;
    std::vector<char> letters;
    detail::geodesic_dfs(G, x, G.multiply(G.invert(x), y), letters, out, cap);
    return out;
}

// --- projections ------------------------------------------------------------

struct ProjectionResult {
    Element source;
    std::vector<int> projections;  // indices into the target path, ascending
    int distance = 0;              // the minimal distance attained
};

// Nearest-point projection of x onto the path: exact minimizer set by
// distance evaluation at every point.
inline ProjectionResult project(const GroupModel& G, const Element& x, const PathSegment& target) {
    if (target.points.empty()) throw usage_error("project: empty path");
    ProjectionResult res;
    res.source = x;
    res.distance = -1;
    for (int i = 0; i < target.num_points(); ++i) {
        int d = distance(G, x, target.points[i]);
        if (res.distance < 0 || d < res.distance) {
            res.distance = d;
            res.projections.assign(1, i);
        } else if (d == res.distance) {
            res.projections.push_back(i);
        }
    }
    return res;
}

namespace detail {
constexpr size_t kDiameterGuard = 10000;

inline int diameter(const GroupModel& G, const std::vector<Element>& pts) {
    if (pts.size() > kDiameterGuard)
        throw resource_error("diameter: point set exceeds guard", 0);
    int best = 0;
    for (size_t i = 0; i < pts.size(); ++i)
        for (size_t j = i + 1; j < pts.size(); ++j)
            best = std::max(best, distance(G, pts[i], pts[j]));
    return best;
}
}  // namespace detail

// d_gamma(Y, Y') = diam(pi_gamma(Y) u pi_gamma(Y')). Y' may be empty, giving
// diam pi_gamma(Y).
inline int projection_diameter(const GroupModel& G, const PathSegment& gamma,
                               const std::vector<Element>& Y, const std::vector<Element>& Yp) {
    if (Y.empty() && Yp.empty()) throw usage_error("projection_diameter: both sets empty");
    std::vector<Element> proj;
    auto add = [&](const std::vector<Element>& set) {
        for (const Element& y : set)
            for (int idx : project(G, y, gamma).projections) proj.push_back(gamma.points[idx]);
    };
    add(Y);
    add(Yp);
    std::sort(proj.begin(), proj.end(),
              [](const Element& a, const Element& b) { return shortlex_less(a, b); });
    proj.erase(std::unique(proj.begin(), proj.end()), proj.end());
    return detail::diameter(G, proj);
}

// Exact discrete Hausdorff distance between the point sets of two paths.
inline int hausdorff_distance(const GroupModel& G, const PathSegment& a, const PathSegment& b) {
    if (a.points.empty() || b.points.empty())
        throw usage_error("hausdorff_distance: empty path");
    auto one_sided = [&](const PathSegment& from, const PathSegment& to) {
        int worst = 0;
        for (const Element& p : from.points) {
            int best = -1;
            for (const Element& q : to.points) {
                int d = distance(G, p, q);
                if (best < 0 || d < best) best = d;
            }
            worst = std::max(worst, best);
        }
        return worst;
    };
    return std::max(one_sided(a, b), one_sided(b, a));
}

// D-fellow traveling: endpoints within D (strictly) and Hausdorff distance
// smaller than D.
inline bool fellow_travel(const GroupModel& G, const PathSegment& a, const PathSegment& b,
                          int D) {
    return distance(G, a.front(), b.front()) < D && distance(G, a.back(), b.back()) < D &&
           hausdorff_distance(G, a, b) < D;
}

// --- balls and spheres -------------------------------------------------------

struct BallIndex {
    int radius = -1;
    std::vector<std::vector<Element>> spheres;  // spheres[r] = all g with |g| = r

    BigInt ball_size() const {
        BigInt total = 0;
        for (const auto& s : spheres) total += (int64_t)s.size();
        return total;
    }
};

// Complete duplicate-free ball via DFS through the geodesic automaton,
// sphere by sphere. Throws resource_error naming the largest completed
// radius if a sphere would push the element count past max_elements.
inline BallIndex enumerate_ball(const GeodesicAutomaton& A, int n,
                                int64_t max_elements = 10'000'000) {
    if (n < 0) throw usage_error("enumerate_ball: negative radius");
    BallIndex ball;
    int64_t used = 0;
    for (int r = 0; r <= n; ++r) {
        BigInt next = A.sphere_count(r);
        if (used + next > max_elements)
            throw resource_error("enumerate_ball: element limit hit at radius " +
                                     std::to_string(r),
                                 r - 1);
        ball.spheres.push_back(A.sphere_elements(r));
        used += (int64_t)ball.spheres.back().size();
        ball.radius = r;
    }
    return ball;
}

// BFS oracle, independent of the automaton: grows spheres by appending all
// letters and keeping the words whose normal form got longer.
inline std::vector<std::vector<Element>> bfs_spheres(const GroupModel& G, int n) {
    std::vector<std::vector<Element>> spheres;
    spheres.push_back({G.identity()});
    for (int r = 1; r <= n; ++r) {
        std::vector<std::string> cand;
        for (const Element& e : spheres[r - 1]) {
            for (int s = 0; s < G.num_letters(); ++s) {
                std::string w = e.code();
                G.append_code(w, (char)s);
                if ((int)w.size() == r) cand.push_back(std::move(w));
            }
        }
        std::sort(cand.begin(), cand.end());
        cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
        std::vector<Element> sphere;
        sphere.reserve(cand.size());
        for (std::string& w : cand) sphere.push_back(G.from_code(w));
        spheres.push_back(std::move(sphere));
    }
    return spheres;
}

}  // namespace raag
