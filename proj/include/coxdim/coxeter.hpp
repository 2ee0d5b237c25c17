#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace coxdim {

using Letter = std::uint16_t;
using Word = std::vector<Letter>;

inline constexpr std::size_t kDefaultBallCap = 10'000'000;

// Complete graph K_m with edge labels m_ij >= 3. Generators are numbered 1..m.
class DefiningGraph {
public:
    DefiningGraph() = default;

    static DefiningGraph uniform(int m, int M);
    // labels[i][j] for 0-based i, j; diagonal ignored.
    static DefiningGraph from_matrix(const std::vector<std::vector<int>>& labels);
    // Text format: "m=<int>" then either "uniform=<M>" or one "i j m_ij" line per pair.
    static DefiningGraph parse(std::string_view text);
    static DefiningGraph load(const std::string& path);

    int m() const { return m_; }
    int label(int i, int j) const;  // 1-based
    int max_label() const { return max_label_; }
    bool is_uniform() const;
    std::string to_text() const;

    bool operator==(const DefiningGraph&) const = default;

private:
    int m_ = 0;
    int max_label_ = 0;
    std::vector<int> labels_;  // m*m, 0-based, diagonal 1
};

struct WordHash {
    std::size_t operator()(const Word& w) const noexcept;
};

// ShortLex normal form of an element of W.
struct GroupElement {
    Word nf;

    std::size_t length() const { return nf.size(); }
    bool is_identity() const { return nf.empty(); }
    std::string str() const;  // "e" or letters joined by '.'

    bool operator==(const GroupElement&) const = default;
    // ShortLex order: by length, then lexicographically.
    std::strong_ordering operator<=>(const GroupElement& o) const;
};

struct GroupElementHash {
    std::size_t operator()(const GroupElement& g) const noexcept { return WordHash{}(g.nf); }
};

struct BallEnumeration {
    std::vector<GroupElement> elements;  // ShortLex order
    std::vector<std::size_t> sphere_sizes;
};

// Word problem and normal forms for W_Gamma. Normal forms are computed by
// peeling off the smallest left descent, with descents decided in the Tits
// geometric representation.
class CoxeterGroup {
public:
    explicit CoxeterGroup(DefiningGraph g);

    const DefiningGraph& graph() const { return graph_; }
    int rank() const { return graph_.m(); }

    GroupElement reduce(const Word& w) const;
    GroupElement multiply(const GroupElement& a, int s) const;       // a * s
    GroupElement left_multiply(int s, const GroupElement& a) const;  // s * a
    GroupElement product(const GroupElement& a, const GroupElement& b) const;
    GroupElement inverse(const GroupElement& a) const;

    // True iff l(a s) < l(a).
    bool is_right_descent(const GroupElement& a, int s) const;
    // Reflection u s u^{-1}; identifies the wall through the edge (u, us).
    GroupElement reflection(const GroupElement& u, int s) const;
    // Unique minimal-length element of the coset g W_J.
    GroupElement min_coset_rep(const GroupElement& g, std::span<const int> J) const;
    // Cayley graph distance |a^{-1} b|.
    std::size_t distance(const GroupElement& a, const GroupElement& b) const;

    BallEnumeration enumerate_ball(int radius, std::size_t cap = kDefaultBallCap) const;

private:
    void check_letter(int s) const;
    bool negative(const long double* v) const;

    DefiningGraph graph_;
    std::vector<long double> form_;  // B(alpha_i, alpha_j), m*m row-major
};

// Reference word problem by saturating braid moves and deletions of
// adjacent equal letters. Exponential; only for short words in tests.
GroupElement reduce_closure(const Word& w, const DefiningGraph& g);

Word reversed(const Word& w);

}  // namespace coxdim
