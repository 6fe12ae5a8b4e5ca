#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstring>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "metric.hpp"

namespace raag {

struct ContractionParams {
    int D = 1;                              // contraction constant candidate
    int R = 2;                              // test radius around the segment
    int geodesic_cap = 200;                 // geodesics examined per point pair
    std::vector<int> D_grid = {1, 2, 4, 8, 16};

    void validate() const {
        if (D <= 0 || R <= 0 || geodesic_cap <= 0)
            throw usage_error("ContractionParams: D, R, cap must be positive");
        for (size_t i = 0; i + 1 < D_grid.size(); ++i)
            if (D_grid[i] >= D_grid[i + 1])
                throw usage_error("ContractionParams: grid must be strictly increasing");
    }
};

// A geodesic kappa with d(gamma, kappa) > D whose projection onto gamma has
// diameter >= D. geodesic_index is kappa's position in the lexicographic
// enumeration for its endpoint pair.
struct ContractionWitness {
    PathSegment kappa;
    int dist_to_segment = 0;
    int proj_diameter = 0;
    int64_t geodesic_index = 0;
};

struct ContractionVerdict {
    bool contracting = true;     // true = no witness found at this scale
    std::optional<ContractionWitness> witness;
    bool caps_hit = false;
    int64_t pairs_tested = 0;
};

namespace detail {

inline bool shortlex_code_less(const std::string& a, const std::string& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
}

// Letter codes pack injectively into 128 bits when there are at most 14
// letters (4 bits each, 30 positions, length in the top byte).
using Key128 = unsigned __int128;

inline Key128 pack_code(const std::string& s) {
    Key128 k = (Key128)s.size() << 120;
    for (size_t i = 0; i < s.size(); ++i) k |= (Key128)(unsigned char)s[i] << (4 * i);
    return k;
}

// Fixed-capacity normal-form word; the geodesic DFS spends most of its time
// appending letters, and a flat buffer keeps that allocation-free.
struct SmallWord {
    static constexpr int kMax = 63;
    unsigned char len = 0;
    unsigned char b[kMax];

    void assign(const std::string& s) {
        if (s.size() > kMax) throw resource_error("contraction scope word too long", kMax);
        len = (unsigned char)s.size();
        std::memcpy(b, s.data(), s.size());
    }
    void assign(const SmallWord& o) {
        len = o.len;
        std::memcpy(b, o.b, o.len);
    }
    std::string str() const { return std::string((const char*)b, len); }
    bool empty() const { return len == 0; }
};

inline Key128 pack_small(const SmallWord& w) {
    Key128 k = (Key128)w.len << 120;
    for (int i = 0; i < w.len; ++i) k |= (Key128)w.b[i] << (4 * i);
    return k;
}

// Right-multiplies a geodesic word (not necessarily ShortLex-normal) by a
// letter, keeping it geodesic: cancel s^-1 through the commuting suffix or
// push s at the end.
inline void word_append(const GroupModel& G, SmallWord& w, unsigned char s) {
    for (int j = w.len - 1; j >= 0; --j) {
        unsigned char y = w.b[j];
        if (y == (s ^ 1)) {
            std::memmove(w.b + j, w.b + j + 1, (size_t)(w.len - j - 1));
            --w.len;
            return;
        }
        if (!G.independent((char)y, (char)s)) break;
    }
    if (w.len == SmallWord::kMax)
        throw resource_error("contraction scope word too long", SmallWord::kMax);
    w.b[w.len++] = s;
}

// Mirrors GroupModel::append_code on the flat buffer.
inline void append_small(const GroupModel& G, SmallWord& w, unsigned char x) {
    int n = w.len;
    for (int j = n - 1; j >= 0; --j) {
        unsigned char y = w.b[j];
        if ((y >> 1) == (x >> 1)) {
            if (y == (x ^ 1)) {
                std::memmove(w.b + j, w.b + j + 1, (size_t)(n - j - 1));
                --w.len;
                return;
            }
            break;
        }
        if (!G.independent((char)y, (char)x)) break;
    }
    int k = n;
    while (k > 0 && G.independent((char)w.b[k - 1], (char)x)) --k;
    int p = k;
    while (p < n && !(x < w.b[p])) ++p;
    if (n == SmallWord::kMax) throw resource_error("contraction scope word too long", SmallWord::kMax);
    std::memmove(w.b + p + 1, w.b + p, (size_t)(n - p));
    w.b[p] = x;
    ++w.len;
}

// Open-addressing map with 128-bit keys; the hot path of the contraction
// engine spends most of its time in lookups, so this avoids per-node
// allocation and string hashing.
template <class V>
class FlatMap {
public:
    FlatMap() { grow(1024); }

    V* find(Key128 k) {
        size_t i = slot(k);
        while (keys_[i] != kEmpty) {
            if (keys_[i] == k) return &vals_[i];
            i = (i + 1) & mask_;
        }
        return nullptr;
    }

    std::pair<V*, bool> try_emplace(Key128 k) {
        if (count_ * 10 >= keys_.size() * 7) grow(keys_.size() * 2);
        size_t i = slot(k);
        while (keys_[i] != kEmpty) {
            if (keys_[i] == k) return {&vals_[i], false};
            i = (i + 1) & mask_;
        }
        keys_[i] = k;
        ++count_;
        return {&vals_[i], true};
    }

private:
    static constexpr Key128 kEmpty = ~(Key128)0;

    static size_t slot_hash(Key128 k) {
        uint64_t z = (uint64_t)k ^ ((uint64_t)(k >> 64) * 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        return (size_t)(z ^ (z >> 31));
    }

    size_t slot(Key128 k) const { return slot_hash(k) & mask_; }

    void grow(size_t n) {
        std::vector<Key128> old_keys = std::move(keys_);
        std::vector<V> old_vals = std::move(vals_);
        keys_.assign(n, kEmpty);
        vals_.assign(n, V{});
        mask_ = n - 1;
        for (size_t i = 0; i < old_keys.size(); ++i) {
            if (old_keys[i] == kEmpty) continue;
            size_t j = slot(old_keys[i]);
            while (keys_[j] != kEmpty) j = (j + 1) & mask_;
            keys_[j] = old_keys[i];
            vals_[j] = std::move(old_vals[i]);
        }
    }

    std::vector<Key128> keys_;
    std::vector<V> vals_;
    size_t mask_ = 0;
    size_t count_ = 0;
};

// Map keyed by normal-form code strings: packed flat map when the group and
// word lengths permit, std::unordered_map otherwise.
template <class V>
class CodeMap {
public:
    explicit CodeMap(bool packed) : packed_(packed) {}

    V* find(const std::string& s) {
        if (packed_) return flat_.find(pack_code(s));
        auto it = slow_.find(s);
        return it == slow_.end() ? nullptr : &it->second;
    }

    V* find(const SmallWord& w) {
        if (packed_) return flat_.find(pack_small(w));
        auto it = slow_.find(w.str());
        return it == slow_.end() ? nullptr : &it->second;
    }

    std::pair<V*, bool> try_emplace(const std::string& s) {
        if (packed_) return flat_.try_emplace(pack_code(s));
        auto [it, fresh] = slow_.try_emplace(s);
        return {&it->second, fresh};
    }

    std::pair<V*, bool> try_emplace(const SmallWord& w) {
        if (packed_) return flat_.try_emplace(pack_small(w));
        auto [it, fresh] = slow_.try_emplace(w.str());
        return {&it->second, fresh};
    }

private:
    bool packed_;
    FlatMap<V> flat_;
    std::unordered_map<std::string, V> slow_;
};

// Per-segment scratch space: the R-neighborhood of gamma with exact distances
// and exact nearest-point projection index sets, plus lazy caches for points
// outside it.
class ContractionScope {
public:
    ContractionScope(const GroupModel& G, const PathSegment& gamma, int R)
        : G_(G),
          gamma_(gamma),
          R_(R),
          packed_(packable(G, gamma, R)),
          dist_(packed_),
          labels_(packed_),
          outer_proj_(packed_) {
        int P = gamma.num_points();
        gd_.assign(P, std::vector<int>(P, -1));
        // multi-source layered BFS; a point at distance k inherits the
        // projection sets of all its distance-(k-1) neighbors, which is
        // exactly its nearest-point projection set
        std::vector<std::string> frontier;
        for (int i = 0; i < P; ++i) {
            const std::string& c = gamma.points[i].code();
            auto [slot, fresh] = dist_.try_emplace(c);
            *slot = 0;
            if (fresh) frontier.push_back(c);
            merge_label(*labels_.try_emplace(c).first, {i});
        }
        for (int k = 1; k <= R; ++k) {
            std::vector<std::string> next;
            for (const std::string& u : frontier) {
                std::vector<int> lu = *labels_.try_emplace(u).first;
                for (int s = 0; s < G.num_letters(); ++s) {
                    std::string v = u;
                    G.append_code(v, (char)s);
                    auto [slot, fresh] = dist_.try_emplace(v);
                    if (!fresh && *slot < k) continue;
                    if (fresh) {
                        *slot = k;
                        next.push_back(v);
                    }
                    merge_label(*labels_.try_emplace(v).first, lu);
                }
            }
            frontier.swap(next);
        }
    }

    // conservative word-length bound over everything the engine touches:
    // BFS points, interval points between far pairs, and the initial
    // reverse-difference words
    static bool packable(const GroupModel& G, const PathSegment& gamma, int R) {
        if (G.num_letters() > 14) return false;
        size_t maxlen = 0;
        for (const Element& p : gamma.points) maxlen = std::max(maxlen, p.code().size());
        size_t span = gamma.points.size();
        size_t bound = std::max(maxlen + 3 * (size_t)R + span, 2 * (maxlen + (size_t)R));
        return bound <= 30;
    }

    const GroupModel& group() const { return G_; }
    int radius() const { return R_; }

    // d(u, gamma) if u lies in the R-neighborhood; far beyond R otherwise.
    // Since the engine always runs with R > D, an unknown point is far.
    const int* known_distance(const std::string& code) { return dist_.find(code); }
    const int* known_distance(const SmallWord& w) { return dist_.find(w); }

    const std::vector<int>& projection(const SmallWord& w) {
        if (const std::vector<int>* lab = labels_.find(w)) return *lab;
        auto [slot, fresh] = outer_proj_.try_emplace(w);
        if (fresh) compute_outer(w.str(), *slot);
        return *slot;
    }

    // Exact projection index set; computed directly for points beyond R.
    const std::vector<int>& projection(const std::string& code) {
        if (const std::vector<int>* lab = labels_.find(code)) return *lab;
        auto [slot, fresh] = outer_proj_.try_emplace(code);
        if (fresh) compute_outer(code, *slot);
        return *slot;
    }

    // exact d(p, gamma) for points beyond the BFS radius
    int exact_distance(const Element& p) const {
        Element inv = G_.invert(p);
        int best = -1;
        for (int i = 0; i < gamma_.num_points(); ++i) {
            int d = G_.multiply(inv, gamma_.points[i]).length();
            if (best < 0 || d < best) best = d;
        }
        return best;
    }

    int gamma_distance(int i, int j) {
        if (gd_[i][j] >= 0) return gd_[i][j];
        int d = raag::distance(G_, gamma_.points[i], gamma_.points[j]);
        gd_[i][j] = gd_[j][i] = d;
        return d;
    }

    // diameter of a set of gamma indices in the word metric
    int index_diameter(const std::vector<int>& idx) {
        int best = 0;
        for (size_t a = 0; a < idx.size(); ++a)
            for (size_t b = a + 1; b < idx.size(); ++b)
                best = std::max(best, gamma_distance(idx[a], idx[b]));
        return best;
    }

    // test points: all u with d(u, centers) <= R, centers spaced at `stride`
    // along gamma (endpoints always included), sorted ShortLex
    std::vector<std::string> neighborhood(int stride) const {
        CodeMap<char> seen(packed_);
        std::vector<std::string> out;
        std::vector<std::string> frontier;
        auto add = [&](const std::string& c, std::vector<std::string>& into) {
            if (seen.try_emplace(c).second) {
                out.push_back(c);
                into.push_back(c);
            }
        };
        int P = gamma_.num_points();
        for (int i = 0; i < P; i += stride) add(gamma_.points[i].code(), frontier);
        add(gamma_.points[P - 1].code(), frontier);
        for (int k = 1; k <= R_; ++k) {
            std::vector<std::string> next;
            for (const std::string& u : frontier)
                for (int s = 0; s < G_.num_letters(); ++s) {
                    std::string v = u;
                    G_.append_code(v, (char)s);
                    add(v, next);
                }
            frontier.swap(next);
        }
        std::sort(out.begin(), out.end(), shortlex_code_less);
        return out;
    }

    static void merge_label(std::vector<int>& into, const std::vector<int>& from) {
        for (int i : from)
            if (!std::binary_search(into.begin(), into.end(), i))
                into.insert(std::lower_bound(into.begin(), into.end(), i), i);
    }

private:
    void compute_outer(const std::string& code, std::vector<int>& out) const {
        Element inv = G_.invert(G_.from_code(code));
        int best = -1;
        for (int i = 0; i < gamma_.num_points(); ++i) {
            int d = G_.multiply(inv, gamma_.points[i]).length();
            if (best < 0 || d < best) {
                best = d;
                out.assign(1, i);
            } else if (d == best) {
                out.push_back(i);
            }
        }
    }

    const GroupModel& G_;
    const PathSegment& gamma_;
    int R_;
    bool packed_;
    CodeMap<int> dist_;
    CodeMap<std::vector<int>> labels_;
    CodeMap<std::vector<int>> outer_proj_;
    std::vector<std::vector<int>> gd_;
};

// DFS over geodesics from x to y, in lexicographic letter order, restricted to
// points at distance > D from gamma. Returns the first (hence
// lexicographically least) geodesic whose projection diameter reaches D.
// Geodesy is tracked via the forward difference fdiff, a geodesic word for
// cur^-1 * y: a step by letter s is geodesic iff s shuffles to the front of
// fdiff, and the step deletes that occurrence. Differences x^-1 * y share a
// prefix stack across the ShortLex-sorted targets of one source.
class FarGeodesicSearch {
public:
    FarGeodesicSearch(ContractionScope& scope, int D, int cap)
        : scope_(scope), G_(scope.group()), D_(D), cap_(cap) {
        int L = G_.num_letters();
        all_ = (1u << L) - 1;
        conflict_.assign(L, 0);
        for (int a = 0; a < L; ++a)
            for (int b = 0; b < L; ++b)
                if (!G_.independent((char)a, (char)b)) conflict_[a] |= 1u << b;
    }

    bool found = false;
    bool truncated = false;
    std::vector<char> witness_letters;
    int witness_proj_diam = 0;
    int64_t witness_index = 0;

    // Fixes the source x; its far children, their projections and the base of
    // the difference stack do not depend on the target.
    void set_source(const std::string& x, const Element& x_inv) {
        x_code_ = x;
        x_inv_ = x_inv;
        x_.assign(x);
        proj_x_.assign(scope_.projection(x).begin(), scope_.projection(x).end());
        roots_.assign(G_.num_letters(), RootChild{});
        for (int s = 0; s < G_.num_letters(); ++s) {
            RootChild& rc = roots_[s];
            rc.word.assign(x_);
            append_small(G_, rc.word, (unsigned char)s);
            const int* kd = scope_.known_distance(rc.word);
            if (kd && *kd <= D_) continue;  // not far (unknown means > R > D)
            rc.far = true;
            rc.labels = scope_.projection(rc.word);
        }
        prod_.resize(SmallWord::kMax + 1);
        prod_[0].assign(x_inv.code());
        prev_y_.clear();
    }

    void run(const std::string& y_code, const Element& y) {
        // prod_[k] is a geodesic word for x^-1 * (first k letters of y);
        // consecutive sorted targets reuse the shared-prefix entries
        size_t cp = 0;
        while (cp < prev_y_.size() && cp < y_code.size() && prev_y_[cp] == y_code[cp]) ++cp;
        for (size_t k = cp; k < y_code.size(); ++k) {
            prod_[k + 1].assign(prod_[k]);
            word_append(G_, prod_[k + 1], (unsigned char)y_code[k]);
        }
        prev_y_ = y_code;
        const SmallWord& fdiff0 = prod_[y_code.size()];
        examined_ = 0;
        found = false;
        truncated = false;
        letters_.clear();
        proj_ = proj_x_;
        // fixed pool: resizing mid-recursion would invalidate parent frames
        if (pool_.size() < (size_t)fdiff0.len + 1) pool_.resize(fdiff0.len + 1);
        dfs(x_, fdiff0, 0);
        if (truncated && !found) {
            // the lexicographic sweep was capped; still test the pinned
            // canonical geodesic if it stayed out of reach
            check_canonical(x_code_, x_inv_, y);
        }
    }

private:
    struct RootChild {
        bool far = false;
        SmallWord word;
        std::vector<int> labels;
    };

    struct Frame {
        SmallWord next;
        SmallWord fd;
        unsigned char cand[16];
        unsigned char pos[16];
    };

    void dfs(const SmallWord& cur, const SmallWord& fdiff, size_t depth) {
        if (fdiff.empty()) {
            if (examined_ >= cap_) {
                truncated = true;
                return;
            }
            ++examined_;
            int diam = diameter_of_stack();
            if (diam >= D_) {
                found = true;
                witness_letters = letters_;
                witness_proj_diam = diam;
                witness_index = examined_ - 1;
            }
            return;
        }
        Frame& f = pool_[depth];
        // geodesic steps = letters whose first occurrence shuffles to the front
        int ncand = 0;
        unsigned blocked = 0;
        for (int i = 0; i < fdiff.len; ++i) {
            unsigned char l = fdiff.b[i];
            if (!(blocked >> l & 1)) {
                f.cand[ncand] = l;
                f.pos[ncand] = (unsigned char)i;
                ++ncand;
            }
            blocked |= conflict_[l];
            if (blocked == all_) break;
        }
        // enumeration is lexicographic in the step letter
        for (int a = 1; a < ncand; ++a)
            for (int b = a; b > 0 && f.cand[b] < f.cand[b - 1]; --b) {
                std::swap(f.cand[b], f.cand[b - 1]);
                std::swap(f.pos[b], f.pos[b - 1]);
            }
        for (int c = 0; c < ncand; ++c) {
            unsigned char s = f.cand[c];
            const SmallWord* next;
            const std::vector<int>* lab;
            if (depth == 0) {
                const RootChild& rc = roots_[s];
                if (!rc.far) continue;
                next = &rc.word;
                lab = &rc.labels;
            } else {
                f.next.assign(cur);
                append_small(G_, f.next, s);
                const int* kd = scope_.known_distance(f.next);
                if (kd && *kd <= D_) continue;  // not far: prune (unknown means > R > D)
                next = &f.next;
                lab = &scope_.projection(f.next);
            }
            int p = f.pos[c];
            f.fd.len = fdiff.len - 1;
            std::memcpy(f.fd.b, fdiff.b, (size_t)p);
            std::memcpy(f.fd.b + p, fdiff.b + p + 1, (size_t)(fdiff.len - p - 1));
            size_t mark = proj_.size();
            proj_.insert(proj_.end(), lab->begin(), lab->end());
            letters_.push_back((char)s);
            dfs(*next, f.fd, depth + 1);
            letters_.pop_back();
            proj_.resize(mark);
            if (found || truncated) return;
        }
    }

    int diameter_of_stack() {
        scratch_ = proj_;
        std::sort(scratch_.begin(), scratch_.end());
        scratch_.erase(std::unique(scratch_.begin(), scratch_.end()), scratch_.end());
        return scope_.index_diameter(scratch_);
    }

    void check_canonical(const std::string& x, const Element& x_inv, const Element& y) {
        std::string diff = G_.multiply(x_inv, y).code();
        std::string cur = x;
        std::vector<int> proj = scope_.projection(x);
        for (char c : diff) {
            G_.append_code(cur, c);
            auto kd = scope_.known_distance(cur);
            if (kd && *kd <= D_) return;  // canonical geodesic comes near gamma
            ContractionScope::merge_label(proj, scope_.projection(cur));
        }
        int diam = scope_.index_diameter(proj);
        if (diam >= D_) {
            found = true;
            witness_letters.assign(diff.begin(), diff.end());
            witness_proj_diam = diam;
            witness_index = examined_;  // position after the capped sweep
        }
    }

    ContractionScope& scope_;
    const GroupModel& G_;
    int D_;
    int cap_;
    unsigned all_ = 0;
    std::vector<unsigned> conflict_;  // per letter: mask of non-commuting letters
    int64_t examined_ = 0;
    std::string x_code_;
    Element x_inv_;
    SmallWord x_;
    std::vector<RootChild> roots_;
    std::vector<int> proj_x_;
    std::vector<SmallWord> prod_;  // shared difference-prefix stack
    std::string prev_y_;
    std::vector<char> letters_;
    std::vector<int> proj_;     // projection indices along the current path
    std::vector<int> scratch_;
    std::vector<Frame> pool_;   // per-depth buffers
};

inline ContractionVerdict test_segment(ContractionScope& scope, int D, int cap) {
    const GroupModel& G = scope.group();
    ContractionVerdict verdict;
    std::vector<std::string> nbhd = scope.neighborhood(std::max(1, D));
    // only points at distance > D from gamma can lie on a qualifying geodesic
    std::vector<std::string> far;
    for (const std::string& u : nbhd) {
        auto kd = scope.known_distance(u);
        if (kd && *kd > D) far.push_back(u);
    }
    size_t F = far.size();
    std::vector<Element> far_el, far_inv;
    far_el.reserve(F);
    far_inv.reserve(F);
    std::vector<int> pmin(F), pmax(F);
    for (size_t i = 0; i < F; ++i) {
        far_el.push_back(G.from_code(far[i]));
        far_inv.push_back(G.invert(far_el.back()));
        const std::vector<int>& lab = scope.projection(far[i]);
        pmin[i] = lab.front();
        pmax[i] = lab.back();
    }
    FarGeodesicSearch search(scope, D, cap);
    auto try_pair = [&](size_t j) {
        ++verdict.pairs_tested;
        search.run(far[j], far_el[j]);
        if (search.truncated) verdict.caps_hit = true;
        return search.found;
    };
    // two sweeps over the same exhaustive pair set: pairs whose endpoint
    // projections already spread by >= D first (they carry the witnesses in
    // flats), then the rest; the verdict covers every pair either way
    size_t wi = 0, wj = 0;
    bool have = false;
    for (int phase = 0; phase < 2 && !have; ++phase) {
        for (size_t i = 0; i < F && !have; ++i) {
            bool source_set = false;
            for (size_t j = i + 1; j < F; ++j) {
                bool spread = std::max(pmax[i], pmax[j]) - std::min(pmin[i], pmin[j]) >= D;
                if (spread != (phase == 0)) continue;
                if (!source_set) {
                    search.set_source(far[i], far_inv[i]);
                    source_set = true;
                }
                if (try_pair(j)) {
                    wi = i;
                    wj = j;
                    have = true;
                    break;
                }
            }
        }
    }
    if (have) {
        (void)wj;
        ContractionWitness w;
        w.kappa.kind = PathSegment::Kind::geodesic;
        w.kappa.points.push_back(far_el[wi]);
        Element cur = far_el[wi];
        for (char c : search.witness_letters) {
            cur = G.multiply_letter(cur, c);
            w.kappa.points.push_back(cur);
        }
        w.proj_diameter = search.witness_proj_diam;
        w.geodesic_index = search.witness_index;
        w.dist_to_segment = -1;
        for (const Element& p : w.kappa.points) {
            auto kd = scope.known_distance(p.code());
            int d = kd ? *kd : scope.exact_distance(p);
            if (w.dist_to_segment < 0 || d < w.dist_to_segment) w.dist_to_segment = d;
        }
        verdict.witness = std::move(w);
        verdict.contracting = false;
    }
    return verdict;
}

}  // namespace detail

// Finite-scale test of the contraction property: quantifies kappa over all
// geodesics (lexicographic, capped, plus the canonical one if capped out)
// between pairs of far points in the R-neighborhood of gamma's center points.
// true means "no witness found at this scale", never a proof.
inline ContractionVerdict is_D_contracting_segment(const GroupModel& G, const PathSegment& gamma,
                                                   const ContractionParams& p) {
    p.validate();
    if (p.R <= p.D) throw usage_error("is_D_contracting_segment: requires R > D");
    if (gamma.points.size() <= 1) return {};
    detail::ContractionScope scope(G, gamma, p.R);
    return detail::test_segment(scope, p.D, p.geodesic_cap);
}

struct ContractionReport {
    PathSegment segment;
    std::optional<int> D_star;  // smallest grid value passing at this scale
    std::vector<std::pair<int, ContractionWitness>> failures;  // per failed D
    int R = 0;
    int geodesic_cap = 0;
    std::vector<int> D_grid;
    bool caps_hit = false;
    int64_t elapsed_ms = 0;
};

// Ascending grid scan. Grid values >= R pass vacuously (the far set within
// radius R is empty). With a doubling grid each tested center set contains
// the next, so the first passing value is the least.
inline ContractionReport empirical_contraction_constant(const GroupModel& G,
                                                        const PathSegment& gamma, int R,
                                                        const std::vector<int>& grid, int cap) {
    if (grid.empty()) throw usage_error("empirical_contraction_constant: empty grid");
    auto t0 = std::chrono::steady_clock::now();
    ContractionReport rep;
    rep.segment = gamma;
    rep.R = R;
    rep.geodesic_cap = cap;
    rep.D_grid = grid;
    std::optional<detail::ContractionScope> scope;
    if (gamma.points.size() > 1) scope.emplace(G, gamma, R);
    for (int D : grid) {
        if (gamma.points.size() <= 1 || D >= R) {
            rep.D_star = D;
            break;
        }
        ContractionVerdict v = detail::test_segment(*scope, D, cap);
        rep.caps_hit = rep.caps_hit || v.caps_hit;
        if (v.contracting) {
            rep.D_star = D;
            break;
        }
        rep.failures.emplace_back(D, std::move(*v.witness));
    }
    rep.elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                         std::chrono::steady_clock::now() - t0)
                         .count();
    return rep;
}

// Re-derives a witness's certificate from raw distances.
inline bool verify_witness(const GroupModel& G, const PathSegment& gamma,
                           const ContractionWitness& w, int D) {
    if (!is_valid_path(G, w.kappa)) return false;
    int d = -1;
    for (const Element& p : w.kappa.points) {
        int dp = project(G, p, gamma).distance;
        if (d < 0 || dp < d) d = dp;
    }
    if (d <= D) return false;
    int diam = projection_diameter(G, gamma, w.kappa.points, {});
    return diam >= D && diam == w.proj_diameter;
}

// --- axes and classification -------------------------------------------------

struct AxisApprox {
    Element g;
    int m = 0;
    PathSegment path;  // through g^i for -m <= i <= m, kind = concatenated
    double translation_estimate = 0.0;
    bool elliptic = false;  // no linear growth observed at this scale
};

inline AxisApprox axis(const GroupModel& G, const Element& g, int m) {
    if (g.is_identity()) throw usage_error("axis: identity has no axis");
    if (m <= 0) throw usage_error("axis: m must be positive");
    AxisApprox ax;
    ax.g = g;
    ax.m = m;
    ax.path.kind = PathSegment::Kind::concatenated;
    Element cur = G.power(g, -m);
    ax.path.points.push_back(cur);
    for (int i = -m; i < m; ++i) {
        Element nxt = G.multiply(cur, g);
        PathSegment seg = canonical_geodesic(G, cur, nxt);
        for (int k = 1; k < seg.num_points(); ++k) ax.path.points.push_back(seg.points[k]);
        cur = nxt;
    }
    int norm2m = G.power(g, 2 * m).length();
    ax.translation_estimate = norm2m / (2.0 * m);
    ax.elliptic = norm2m < m;
    return ax;
}

enum class ElementClass { contracting, non_contracting, elliptic };

struct ClassifyOutcome {
    ElementClass kind = ElementClass::non_contracting;
    std::optional<int> D_star;
};

// Drops the outer quarter of the points on each side; finite axis truncations
// have endpoint artifacts.
inline PathSegment trim_axis_path(const PathSegment& path) {
    int P = (int)path.points.size();
    int cut = P / 4;
    PathSegment mid;
    mid.kind = path.kind;
    mid.points.assign(path.points.begin() + cut, path.points.end() - cut);
    return mid;
}

// g counts as contracting at scale (p, m) when some grid value <= p.D passes
// on the trimmed axis path.
inline ClassifyOutcome classify_element(const GroupModel& G, const Element& g,
                                        const ContractionParams& p, int m) {
    p.validate();
    ClassifyOutcome out;
    if (g.is_identity()) {
        out.kind = ElementClass::elliptic;
        return out;
    }
    AxisApprox ax = axis(G, g, m);
    if (ax.elliptic) {
        out.kind = ElementClass::elliptic;
        return out;
    }
    ContractionReport rep =
        empirical_contraction_constant(G, trim_axis_path(ax.path), p.R, p.D_grid, p.geodesic_cap);
    out.D_star = rep.D_star;
    out.kind = (rep.D_star && *rep.D_star <= p.D) ? ElementClass::contracting
                                                  : ElementClass::non_contracting;
    return out;
}

// --- alignment and independence ----------------------------------------------

// Consecutive-pair alignment: the far endpoint of each segment and the whole
// next segment project C-close on the current one, and symmetrically.
inline bool is_C_aligned(const GroupModel& G, const std::vector<PathSegment>& paths, int C) {
    if (paths.size() < 2) throw usage_error("is_C_aligned: need at least two paths");
    if (C <= 0) throw usage_error("is_C_aligned: C must be positive");
    for (size_t i = 0; i + 1 < paths.size(); ++i) {
        const PathSegment& k1 = paths[i];
        const PathSegment& k2 = paths[i + 1];
        if (projection_diameter(G, k1, {k1.back()}, k2.points) >= C) return false;
        if (projection_diameter(G, k2, {k2.front()}, k1.points) >= C) return false;
    }
    return true;
}

// diam of the projection of one power-path axis onto the other, symmetrized.
inline int independence_diameter(const GroupModel& G, const Element& g, const Element& h, int m) {
    AxisApprox ag = axis(G, g, m);
    AxisApprox ah = axis(G, h, m);
    if (ag.elliptic || ah.elliptic)
        throw usage_error("independence_diameter: elliptic input at this scale");
    return std::max(projection_diameter(G, ag.path, ah.path.points, {}),
                    projection_diameter(G, ah.path, ag.path.points, {}));
}

}  // namespace raag
