#include "coxdim/coxeter.hpp"

#include "coxdim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>
#include <unordered_set>

namespace coxdim {

namespace {

std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

int parse_int(const std::string& s, const std::string& what) {
    std::size_t pos = 0;
    int v = 0;
    try {
        v = std::stoi(s, &pos);
    } catch (const std::exception&) {
        throw InputError("graph: cannot parse " + what + " from '" + s + "'");
    }
    if (pos != s.size()) throw InputError("graph: trailing characters in " + what + " '" + s + "'");
    return v;
}

}  // namespace

DefiningGraph DefiningGraph::uniform(int m, int M) {
    if (m < 2) throw InputError("graph: need m >= 2, got " + std::to_string(m));
    if (M < 3) throw InputError("graph: labels must be >= 3, got " + std::to_string(M));
    std::vector<std::vector<int>> lab(m, std::vector<int>(m, M));
    return from_matrix(lab);
}

DefiningGraph DefiningGraph::from_matrix(const std::vector<std::vector<int>>& labels) {
    const int m = static_cast<int>(labels.size());
    if (m < 2) throw InputError("graph: need m >= 2");
    DefiningGraph g;
    g.m_ = m;
    g.labels_.assign(static_cast<std::size_t>(m) * m, 1);
    for (int i = 0; i < m; ++i) {
        if (static_cast<int>(labels[i].size()) != m) throw InputError("graph: label matrix is not square");
        for (int j = 0; j < m; ++j) {
            if (i == j) continue;
            if (labels[i][j] != labels[j][i])
                throw InputError("graph: asymmetric labels at (" + std::to_string(i + 1) + "," +
                                 std::to_string(j + 1) + ")");
            if (labels[i][j] < 3)
                throw InputError("graph: label m_" + std::to_string(i + 1) + std::to_string(j + 1) +
                                 " = " + std::to_string(labels[i][j]) + " is below 3");
            g.labels_[i * m + j] = labels[i][j];
            g.max_label_ = std::max(g.max_label_, labels[i][j]);
        }
    }
    return g;
}

DefiningGraph DefiningGraph::parse(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    int m = -1;
    int uniform_label = -1;
    std::vector<std::vector<int>> lab;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::string t = trim(line);
        if (t.empty()) continue;
        if (m < 0) {
            if (t.rfind("m=", 0) != 0) throw InputError("graph: first line must be m=<int>");
            m = parse_int(trim(t.substr(2)), "m");
            if (m < 2) throw InputError("graph: need m >= 2");
            lab.assign(m, std::vector<int>(m, 0));
            continue;
        }
        if (t.rfind("uniform=", 0) == 0) {
            if (uniform_label >= 0) throw InputError("graph: uniform= given twice");
            uniform_label = parse_int(trim(t.substr(8)), "uniform label");
            continue;
        }
        std::istringstream ls(t);
        std::string a, b, c, extra;
        if (!(ls >> a >> b >> c) || (ls >> extra))
            throw InputError("graph: line " + std::to_string(lineno) + " is not 'i j m_ij'");
        int i = parse_int(a, "i"), j = parse_int(b, "j"), v = parse_int(c, "m_ij");
        if (i < 1 || i > m || j < 1 || j > m || i == j)
            throw InputError("graph: bad vertex pair on line " + std::to_string(lineno));
        int& x = lab[i - 1][j - 1];
        int& y = lab[j - 1][i - 1];
        if ((x != 0 && x != v) || (y != 0 && y != v))
            throw InputError("graph: conflicting labels for pair " + std::to_string(i) + " " + std::to_string(j));
        x = v;
        y = v;
    }
    if (m < 0) throw InputError("graph: empty input");
    if (uniform_label >= 0) {
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                if (i != j && lab[i][j] != 0)
                    throw InputError("graph: uniform= cannot be combined with explicit labels");
        return uniform(m, uniform_label);
    }
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            if (lab[i][j] == 0)
                throw InputError("graph: missing label for pair " + std::to_string(i + 1) + " " +
                                 std::to_string(j + 1));
    return from_matrix(lab);
}

DefiningGraph DefiningGraph::load(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw InputError("graph: cannot open " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse(ss.str());
}

int DefiningGraph::label(int i, int j) const {
    if (i < 1 || j < 1 || i > m_ || j > m_) throw InputError("graph: generator index out of range");
    return labels_[(i - 1) * m_ + (j - 1)];
}

bool DefiningGraph::is_uniform() const {
    for (int i = 1; i <= m_; ++i)
        for (int j = i + 1; j <= m_; ++j)
            if (label(i, j) != max_label_) return false;
    return true;
}

std::string DefiningGraph::to_text() const {
    std::ostringstream o;
    o << "m=" << m_ << "\n";
    if (is_uniform()) {
        o << "uniform=" << max_label_ << "\n";
        return o.str();
    }
    for (int i = 1; i <= m_; ++i)
        for (int j = i + 1; j <= m_; ++j) o << i << " " << j << " " << label(i, j) << "\n";
    return o.str();
}

std::size_t WordHash::operator()(const Word& w) const noexcept {
    std::uint64_t h = 1469598103934665603ULL;
    for (Letter l : w) {
        h ^= l;
        h *= 1099511628211ULL;
    }
    h ^= w.size();
    return static_cast<std::size_t>(h);
}

std::string GroupElement::str() const {
    if (nf.empty()) return "e";
    std::string s;
    for (std::size_t i = 0; i < nf.size(); ++i) {
        if (i) s += '.';
        s += std::to_string(nf[i]);
    }
    return s;
}

std::strong_ordering GroupElement::operator<=>(const GroupElement& o) const {
    if (auto c = nf.size() <=> o.nf.size(); c != 0) return c;
    return std::lexicographical_compare_three_way(nf.begin(), nf.end(), o.nf.begin(), o.nf.end());
}

Word reversed(const Word& w) { return Word(w.rbegin(), w.rend()); }

CoxeterGroup::CoxeterGroup(DefiningGraph g) : graph_(std::move(g)) {
    const int m = graph_.m();
    form_.assign(static_cast<std::size_t>(m) * m, 1.0L);
    for (int i = 1; i <= m; ++i)
        for (int j = 1; j <= m; ++j)
            if (i != j)
                form_[(i - 1) * m + (j - 1)] =
                    -std::cos(std::numbers::pi_v<long double> / static_cast<long double>(graph_.label(i, j)));
}

void CoxeterGroup::check_letter(int s) const {
    if (s < 1 || s > graph_.m())
        throw InputError("generator " + std::to_string(s) + " out of range 1.." + std::to_string(graph_.m()));
}

// A root is either nonnegative or nonpositive; the entry of largest
// magnitude decides which, robustly against rounding.
bool CoxeterGroup::negative(const long double* v) const {
    long double best = 0;
    for (int k = 0; k < graph_.m(); ++k)
        if (std::fabs(v[k]) > std::fabs(best)) best = v[k];
    return best < 0;
}

GroupElement CoxeterGroup::reduce(const Word& w) const {
    const int m = graph_.m();
    for (Letter l : w) check_letter(l);
    // G holds rho(g^{-1}) column-major: column t is g^{-1}(alpha_t).
    std::vector<long double> G(static_cast<std::size_t>(m) * m, 0.0L);
    for (int i = 0; i < m; ++i) G[i * m + i] = 1.0L;
    std::vector<long double> row(m);
    for (Letter l : w) {
        // G <- rho(s) G touches only coordinate s of every column.
        const int s = l - 1;
        const long double* B = &form_[s * m];
        for (int t = 0; t < m; ++t) {
            long double* col = &G[t * m];
            long double acc = 0;
            for (int k = 0; k < m; ++k) acc += B[k] * col[k];
            col[s] -= 2 * acc;
        }
    }
    GroupElement out;
    out.nf.reserve(w.size());
    for (;;) {
        int s = -1;
        for (int t = 0; t < m; ++t)
            if (negative(&G[t * m])) {
                s = t;
                break;
            }
        if (s < 0) break;
        out.nf.push_back(static_cast<Letter>(s + 1));
        if (out.nf.size() > w.size()) throw std::logic_error("reduce: descent peeling did not terminate");
        // G <- G rho(s): column t gets -2 B(alpha_s, alpha_t) times column s.
        const long double* B = &form_[s * m];
        const long double* cs = &G[s * m];
        std::vector<long double> colS(cs, cs + m);
        for (int t = 0; t < m; ++t) {
            long double c = 2 * B[t];
            if (c == 0) continue;
            long double* col = &G[t * m];
            for (int k = 0; k < m; ++k) col[k] -= c * colS[k];
        }
    }
    return out;
}

GroupElement CoxeterGroup::multiply(const GroupElement& a, int s) const {
    check_letter(s);
    Word w = a.nf;
    w.push_back(static_cast<Letter>(s));
    return reduce(w);
}

GroupElement CoxeterGroup::left_multiply(int s, const GroupElement& a) const {
    check_letter(s);
    Word w;
    w.reserve(a.nf.size() + 1);
    w.push_back(static_cast<Letter>(s));
    w.insert(w.end(), a.nf.begin(), a.nf.end());
    return reduce(w);
}

GroupElement CoxeterGroup::product(const GroupElement& a, const GroupElement& b) const {
    Word w = a.nf;
    w.insert(w.end(), b.nf.begin(), b.nf.end());
    return reduce(w);
}

GroupElement CoxeterGroup::inverse(const GroupElement& a) const { return reduce(reversed(a.nf)); }

bool CoxeterGroup::is_right_descent(const GroupElement& a, int s) const {
    check_letter(s);
    const int m = graph_.m();
    std::vector<long double> v(m, 0.0L);
    v[s - 1] = 1.0L;
    for (auto it = a.nf.rbegin(); it != a.nf.rend(); ++it) {
        const int r = *it - 1;
        const long double* B = &form_[r * m];
        long double acc = 0;
        for (int k = 0; k < m; ++k) acc += B[k] * v[k];
        v[r] -= 2 * acc;
    }
    return negative(v.data());
}

GroupElement CoxeterGroup::reflection(const GroupElement& u, int s) const {
    check_letter(s);
    Word w = u.nf;
    w.push_back(static_cast<Letter>(s));
    w.insert(w.end(), u.nf.rbegin(), u.nf.rend());
    return reduce(w);
}

GroupElement CoxeterGroup::min_coset_rep(const GroupElement& g, std::span<const int> J) const {
    GroupElement cur = g;
    bool moved = true;
    while (moved) {
        moved = false;
        for (int s : J) {
            if (is_right_descent(cur, s)) {
                cur = multiply(cur, s);
                moved = true;
            }
        }
    }
    return cur;
}

std::size_t CoxeterGroup::distance(const GroupElement& a, const GroupElement& b) const {
    Word w = reversed(a.nf);
    w.insert(w.end(), b.nf.begin(), b.nf.end());
    return reduce(w).length();
}

BallEnumeration CoxeterGroup::enumerate_ball(int radius, std::size_t cap) const {
    if (radius < 0) throw InputError("ball radius must be >= 0");
    BallEnumeration out;
    std::unordered_set<Word, WordHash> seen;
    std::vector<GroupElement> frontier{GroupElement{}};
    seen.insert(Word{});
    out.elements.push_back(GroupElement{});
    out.sphere_sizes.push_back(1);
    for (int r = 1; r <= radius; ++r) {
        std::vector<GroupElement> next;
        for (const auto& g : frontier) {
            for (int s = 1; s <= graph_.m(); ++s) {
                if (is_right_descent(g, s)) continue;
                GroupElement h = multiply(g, s);
                if (seen.insert(h.nf).second) {
                    next.push_back(std::move(h));
                    if (seen.size() > cap)
                        throw ResourceError("ball enumeration exceeded the cap of " + std::to_string(cap) +
                                            " elements");
                }
            }
        }
        std::sort(next.begin(), next.end());
        out.sphere_sizes.push_back(next.size());
        out.elements.insert(out.elements.end(), next.begin(), next.end());
        frontier = std::move(next);
        if (frontier.empty()) break;
    }
    while (static_cast<int>(out.sphere_sizes.size()) <= radius) out.sphere_sizes.push_back(0);
    return out;
}

GroupElement reduce_closure(const Word& input, const DefiningGraph& g) {
    for (Letter l : input)
        if (l < 1 || l > g.m()) throw InputError("generator " + std::to_string(l) + " out of range");
    Word w = input;
restart:
    {
        std::set<Word> cls{w};
        std::deque<Word> queue{w};
        while (!queue.empty()) {
            Word cur = std::move(queue.front());
            queue.pop_front();
            for (std::size_t i = 0; i + 1 < cur.size(); ++i) {
                if (cur[i] == cur[i + 1]) {
                    w = cur;
                    w.erase(w.begin() + static_cast<std::ptrdiff_t>(i), w.begin() + static_cast<std::ptrdiff_t>(i) + 2);
                    goto restart;
                }
            }
            for (std::size_t i = 0; i + 1 < cur.size(); ++i) {
                const Letter a = cur[i], b = cur[i + 1];
                const std::size_t len = static_cast<std::size_t>(g.label(a, b));
                if (i + len > cur.size()) continue;
                bool alt = true;
                for (std::size_t k = 0; k < len && alt; ++k) alt = cur[i + k] == (k % 2 == 0 ? a : b);
                if (!alt) continue;
                Word nxt = cur;
                for (std::size_t k = 0; k < len; ++k) nxt[i + k] = (k % 2 == 0 ? b : a);
                if (cls.insert(nxt).second) queue.push_back(std::move(nxt));
            }
        }
        return GroupElement{*cls.begin()};
    }
}

}  // namespace coxdim
