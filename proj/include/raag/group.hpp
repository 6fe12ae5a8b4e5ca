#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <istream>
#include <memory>
#include <numeric>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "digest.hpp"
#include "errors.hpp"

namespace raag {

// A generator or its inverse. sign is +1 or -1.
struct Letter {
    int vertex = 0;
    int sign = +1;

    friend bool operator==(const Letter&, const Letter&) = default;
};

// An arbitrary (possibly non-geodesic) word in the generators.
using Word = std::vector<Letter>;

// Finite defining graph of a right-angled Artin group. Two generators commute
// iff their vertices are joined by an edge. letter_order[k] is the vertex of
// rank k; positive letters precede negative letters of the same vertex.
struct DefiningGraph {
    int vertex_count = 0;
    std::vector<std::string> vertex_names;
    std::vector<std::pair<int, int>> edges;  // unordered pairs, stored lo < hi
    std::vector<int> letter_order;           // permutation of 0..vertex_count-1

    void validate() const {
        if (vertex_count <= 0) throw input_error("group: vertex_count must be positive");
        if (vertex_count > 30) throw input_error("group: at most 30 vertices supported");
        if ((int)vertex_names.size() != vertex_count)
            throw input_error("group: vertex_names size mismatch");
        for (int i = 0; i < vertex_count; ++i)
            for (int j = i + 1; j < vertex_count; ++j)
                if (vertex_names[i] == vertex_names[j])
                    throw input_error("group: duplicate vertex name '" + vertex_names[i] + "'");
        std::vector<std::pair<int, int>> seen;
        for (auto [u, v] : edges) {
            if (u == v) throw input_error("group: self-loop on vertex " + std::to_string(u));
            if (u < 0 || v < 0 || u >= vertex_count || v >= vertex_count)
                throw input_error("group: edge endpoint out of range");
            auto e = std::minmax(u, v);
            if (std::find(seen.begin(), seen.end(), std::make_pair(e.first, e.second)) != seen.end())
                throw input_error("group: duplicate edge");
            seen.emplace_back(e.first, e.second);
        }
        if ((int)letter_order.size() != vertex_count)
            throw input_error("group: letter_order size mismatch");
        std::vector<int> sorted = letter_order;
        std::sort(sorted.begin(), sorted.end());
        for (int i = 0; i < vertex_count; ++i)
            if (sorted[i] != i) throw input_error("group: letter_order is not a permutation");
    }
};

class GroupModel;

// A group element stored as its canonical geodesic normal form: the
// ShortLex-least geodesic word (vertex rank first, + before -). The length of
// the stored word equals the word-metric norm |g|.
class Element {
public:
    Element() = default;

    const GroupModel* model() const { return model_; }
    int length() const { return (int)code_.size(); }
    bool is_identity() const { return code_.empty(); }

    // Internal byte encoding of the normal form; one byte per letter.
    const std::string& code() const { return code_; }

    Word word() const;

    friend bool operator==(const Element& a, const Element& b) {
        return a.model_ == b.model_ && a.code_ == b.code_;
    }

    // ShortLex order: length first, then the letter order.
    friend bool shortlex_less(const Element& a, const Element& b) {
        if (a.code_.size() != b.code_.size()) return a.code_.size() < b.code_.size();
        return a.code_ < b.code_;
    }

private:
    friend class GroupModel;
    Element(const GroupModel* m, std::string code) : model_(m), code_(std::move(code)) {}

    const GroupModel* model_ = nullptr;
    std::string code_;
};

// Immutable RAAG model. Owns the word problem: canonical normal forms,
// multiplication, inversion, lengths. Safe to share across threads.
class GroupModel {
public:
    explicit GroupModel(DefiningGraph graph) : graph_(std::move(graph)) {
        graph_.validate();
        const int v = graph_.vertex_count;
        rank_.assign(v, 0);
        for (int r = 0; r < v; ++r) rank_[graph_.letter_order[r]] = r;
        vertex_by_rank_ = graph_.letter_order;
        adj_.assign(v, 0ull);
        for (auto [a, b] : graph_.edges) {
            adj_[a] |= 1ull << b;
            adj_[b] |= 1ull << a;
        }
        const int L = 2 * v;
        indep_.assign(L * L, 0);
        for (int x = 0; x < L; ++x)
            for (int y = 0; y < L; ++y) {
                int vx = vertex_by_rank_[x >> 1], vy = vertex_by_rank_[y >> 1];
                indep_[x * L + y] = (vx != vy && (adj_[vx] >> vy & 1)) ? 1 : 0;
            }
        digest_ = digest_hex(canonical_text());
    }

    const DefiningGraph& graph() const { return graph_; }
    int vertex_count() const { return graph_.vertex_count; }
    int num_letters() const { return 2 * graph_.vertex_count; }
    const std::string& digest() const { return digest_; }

    // Letter <-> byte code. Codes sort in letter order.
    char encode(Letter l) const {
        if (l.vertex < 0 || l.vertex >= graph_.vertex_count)
            throw input_error("letter: invalid vertex index " + std::to_string(l.vertex));
        if (l.sign != 1 && l.sign != -1) throw input_error("letter: sign must be +1 or -1");
        return (char)(2 * rank_[l.vertex] + (l.sign < 0 ? 1 : 0));
    }
    Letter decode(char c) const {
        return Letter{vertex_by_rank_[(unsigned char)c >> 1], (c & 1) ? -1 : +1};
    }

    bool independent(char x, char y) const {
        return indep_[(unsigned char)x * num_letters() + (unsigned char)y] != 0;
    }

    Element identity() const { return Element(this, std::string()); }

    // Appends one letter to a normal form, keeping it normal. O(length).
    void append_code(std::string& w, char x) const {
        int n = (int)w.size();
        for (int j = n - 1; j >= 0; --j) {
            char y = w[j];
            if ((y >> 1) == (x >> 1)) {
                if (y == (char)(x ^ 1)) {
                    w.erase((size_t)j, 1);
                    return;
                }
                break;
            }
            if (!independent(y, x)) break;
        }
        n = (int)w.size();
        int k = n;
        while (k > 0 && independent(w[k - 1], x)) --k;
        int p = k;
        while (p < n && !(x < w[p])) ++p;
        w.insert((size_t)p, 1, x);
    }

    Element normalize(const Word& w) const {
        std::string out;
        out.reserve(w.size());
        for (const Letter& l : w) append_code(out, encode(l));
        return Element(this, std::move(out));
    }

    Element from_code(std::string code) const {
        std::string out;
        out.reserve(code.size());
        for (char c : code) {
            if ((unsigned char)c >= (unsigned)num_letters()) throw input_error("bad letter code");
            append_code(out, c);
        }
        return Element(this, std::move(out));
    }

    Element multiply(const Element& x, const Element& y) const {
        check_model(x);
        check_model(y);
        std::string out = x.code();
        out.reserve(out.size() + y.code().size());
        for (char c : y.code()) append_code(out, c);
        return Element(this, std::move(out));
    }

    Element multiply_letter(const Element& x, char code) const {
        check_model(x);
        std::string out = x.code();
        append_code(out, code);
        return Element(this, std::move(out));
    }

    Element invert(const Element& x) const {
        check_model(x);
        std::string out;
        out.reserve(x.code().size());
        for (auto it = x.code().rbegin(); it != x.code().rend(); ++it)
            append_code(out, (char)(*it ^ 1));
        return Element(this, std::move(out));
    }

    int length(const Element& x) const {
        check_model(x);
        return x.length();
    }

    Element power(const Element& x, int k) const {
        Element base = k < 0 ? invert(x) : x;
        Element acc = identity();
        for (int i = 0; i < std::abs(k); ++i) acc = multiply(acc, base);
        return acc;
    }

    void check_model(const Element& x) const {
        if (x.model() != this) throw usage_error("element belongs to a different group model");
    }

    // Canonical plain-text form of the definition; digests key caches on it.
    std::string canonical_text() const {
        std::ostringstream os;
        os << "vertices:";
        for (int r = 0; r < graph_.vertex_count; ++r)
            os << ' ' << graph_.vertex_names[vertex_by_rank_[r]];
        os << '\n';
        auto edges = graph_.edges;
        for (auto& e : edges) {
            int a = rank_[e.first], b = rank_[e.second];
            e = {std::min(a, b), std::max(a, b)};
        }
        std::sort(edges.begin(), edges.end());
        for (auto [a, b] : edges)
            os << "edge: " << graph_.vertex_names[vertex_by_rank_[a]] << ' '
               << graph_.vertex_names[vertex_by_rank_[b]] << '\n';
        return os.str();
    }

private:
    DefiningGraph graph_;
    std::vector<int> rank_;            // vertex -> rank in letter order
    std::vector<int> vertex_by_rank_;  // rank -> vertex
    std::vector<uint64_t> adj_;
    std::vector<uint8_t> indep_;
    std::string digest_;
};

inline Word Element::word() const {
    Word w;
    w.reserve(code_.size());
    for (char c : code_) w.push_back(model_->decode(c));
    return w;
}

// --- parsing and formatting -------------------------------------------------

// Group definition file:
//   vertices: <names in letter order>
//   edge: <name> <name>
inline GroupModel parse_group(std::istream& in) {
    DefiningGraph g;
    std::string line;
    std::unordered_map<std::string, int> index;
    bool saw_vertices = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag)) continue;
        if (tag == "vertices:") {
            if (saw_vertices) throw input_error("group file: repeated vertices line");
            saw_vertices = true;
            std::string name;
            while (ls >> name) {
                if (index.count(name)) throw input_error("group file: duplicate vertex " + name);
                index[name] = (int)g.vertex_names.size();
                g.vertex_names.push_back(name);
            }
            g.vertex_count = (int)g.vertex_names.size();
        } else if (tag == "edge:") {
            if (!saw_vertices) throw input_error("group file: edge before vertices line");
            std::string a, b;
            if (!(ls >> a >> b)) throw input_error("group file: malformed edge line: " + line);
            auto ia = index.find(a), ib = index.find(b);
            if (ia == index.end()) throw input_error("group file: unknown vertex " + a);
            if (ib == index.end()) throw input_error("group file: unknown vertex " + b);
            g.edges.emplace_back(std::min(ia->second, ib->second),
                                 std::max(ia->second, ib->second));
        } else if (tag[0] == '#') {
            continue;
        } else {
            throw input_error("group file: unrecognized line: " + line);
        }
    }
    if (!saw_vertices) throw input_error("group file: missing vertices line");
    g.letter_order.resize(g.vertex_count);
    std::iota(g.letter_order.begin(), g.letter_order.end(), 0);
    return GroupModel(std::move(g));
}

inline GroupModel parse_group_text(const std::string& text) {
    std::istringstream is(text);
    return parse_group(is);
}

// Word syntax: whitespace-separated factors `name`, `name^k`, `name^-k`.
inline Word parse_word(const GroupModel& G, const std::string& text) {
    Word w;
    std::istringstream is(text);
    std::string tok;
    const auto& names = G.graph().vertex_names;
    while (is >> tok) {
        std::string name = tok;
        long long exp = 1;
        if (auto caret = tok.find('^'); caret != std::string::npos) {
            name = tok.substr(0, caret);
            try {
                exp = std::stoll(tok.substr(caret + 1));
            } catch (...) {
                throw input_error("word: bad exponent in " + tok);
            }
        }
        auto it = std::find(names.begin(), names.end(), name);
        if (it == names.end()) {
            // "e" denotes the identity (round-trips to_string) unless it names a vertex
            if (name == "e" && tok == "e") continue;
            throw input_error("word: unknown generator " + name);
        }
        int v = (int)(it - names.begin());
        int s = exp < 0 ? -1 : +1;
        for (long long i = 0; i < std::llabs(exp); ++i) w.push_back(Letter{v, s});
    }
    return w;
}

inline Element parse_element(const GroupModel& G, const std::string& text) {
    return G.normalize(parse_word(G, text));
}

// Renders an element as run-length factors, e.g. "a b^-2 c".
inline std::string to_string(const Element& x) {
    if (x.is_identity()) return "e";
    const auto& G = *x.model();
    std::ostringstream os;
    const std::string& w = x.code();
    for (size_t i = 0; i < w.size();) {
        size_t j = i;
        while (j < w.size() && w[j] == w[i]) ++j;
        Letter l = G.decode(w[i]);
        long long exp = (long long)(j - i) * l.sign;
        if (i) os << ' ';
        os << G.graph().vertex_names[l.vertex];
        if (exp != 1) os << '^' << exp;
        i = j;
    }
    return os.str();
}

struct ElementHash {
    size_t operator()(const Element& e) const {
        return std::hash<std::string>()(e.code()) ^
               (std::hash<const void*>()(e.model()) << 1);
    }
};

// --- standard test groups ---------------------------------------------------

inline GroupModel make_free_group(int n) {
    DefiningGraph g;
    g.vertex_count = n;
    for (int i = 0; i < n; ++i) g.vertex_names.push_back(std::string(1, (char)('a' + i)));
    g.letter_order.resize(n);
    std::iota(g.letter_order.begin(), g.letter_order.end(), 0);
    return GroupModel(std::move(g));
}

inline GroupModel make_abelian_group(int n) {
    DefiningGraph g;
    g.vertex_count = n;
    for (int i = 0; i < n; ++i) g.vertex_names.push_back(std::string(1, (char)('a' + i)));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) g.edges.emplace_back(i, j);
    g.letter_order.resize(n);
    std::iota(g.letter_order.begin(), g.letter_order.end(), 0);
    return GroupModel(std::move(g));
}

// Z^2 * Z: vertices a, b, c with the single edge {a, b}.
inline GroupModel make_z2_free_z() {
    DefiningGraph g;
    g.vertex_count = 3;
    g.vertex_names = {"a", "b", "c"};
    g.edges = {{0, 1}};
    g.letter_order = {0, 1, 2};
    return GroupModel(std::move(g));
}

}  // namespace raag
