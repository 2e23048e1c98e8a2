#pragma once

// Surface-group presentations with geometric generators a_i, b_i, c_j and
// words over them. Products follow the convention that gamma1*gamma2 runs
// along gamma2 first; as group elements this is ordinary left-to-right
// multiplication, so evaluating a word multiplies images left to right.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <deque>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "telliptic/errors.hpp"

namespace telliptic {

enum class GenKind : std::uint8_t { A = 0, B = 1, C = 2 };

struct Letter {
    GenKind kind = GenKind::C;
    int index = 1;  // 1-based
    bool inverse = false;

    Letter inverted() const { return {kind, index, !inverse}; }
    bool cancels(const Letter& o) const {
        return kind == o.kind && index == o.index && inverse != o.inverse;
    }
    // Total order used for normal forms.
    int key() const { return (static_cast<int>(kind) * 4096 + index) * 2 + (inverse ? 1 : 0); }

    friend bool operator==(const Letter&, const Letter&) = default;
};

class Word {
public:
    Word() = default;
    explicit Word(std::vector<Letter> letters) : letters_(std::move(letters)) { reduce(); }

    static Word generator(GenKind kind, int index, int power = 1) {
        std::vector<Letter> ls;
        const Letter l{kind, index, power < 0};
        for (int k = 0; k < std::abs(power); ++k) ls.push_back(l);
        return Word(std::move(ls));
    }

    /// Parses "c1.C3.c2.c3"; uppercase letters are inverses. "" and "1" are the identity.
    static Word parse(std::string_view text) {
        std::vector<Letter> ls;
        if (text.empty() || text == "1") return Word();
        std::size_t pos = 0;
        while (pos <= text.size()) {
            std::size_t dot = text.find('.', pos);
            if (dot == std::string_view::npos) dot = text.size();
            const std::string_view tok = text.substr(pos, dot - pos);
            ls.push_back(parse_letter(tok));
            pos = dot + 1;
            if (dot == text.size()) break;
        }
        return Word(std::move(ls));
    }

    const std::vector<Letter>& letters() const { return letters_; }
    std::size_t size() const { return letters_.size(); }
    bool empty() const { return letters_.empty(); }

    Word inverse() const {
        std::vector<Letter> ls;
        ls.reserve(letters_.size());
        for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) ls.push_back(it->inverted());
        return Word(std::move(ls));
    }

    Word pow(int k) const {
        Word base = k < 0 ? inverse() : *this;
        Word out;
        for (int i = 0; i < std::abs(k); ++i) out = out * base;
        return out;
    }

    friend Word operator*(const Word& x, const Word& y) {
        std::vector<Letter> ls = x.letters_;
        ls.insert(ls.end(), y.letters_.begin(), y.letters_.end());
        return Word(std::move(ls));
    }

    std::string to_string() const {
        std::string out;
        for (std::size_t k = 0; k < letters_.size(); ++k) {
            if (k) out += '.';
            const Letter& l = letters_[k];
            char ch = l.kind == GenKind::A ? 'a' : l.kind == GenKind::B ? 'b' : 'c';
            if (l.inverse) ch = static_cast<char>(std::toupper(ch));
            out += ch;
            out += std::to_string(l.index);
        }
        return out;
    }

    friend bool operator==(const Word&, const Word&) = default;

private:
    static Letter parse_letter(std::string_view tok) {
        if (tok.size() < 2) throw ParseError("malformed word letter '" + std::string(tok) + "'");
        Letter l;
        switch (tok[0]) {
            case 'a': case 'A': l.kind = GenKind::A; break;
            case 'b': case 'B': l.kind = GenKind::B; break;
            case 'c': case 'C': l.kind = GenKind::C; break;
            default: throw ParseError("unknown generator symbol '" + std::string(tok) + "'");
        }
        l.inverse = std::isupper(static_cast<unsigned char>(tok[0])) != 0;
        int idx = 0;
        for (std::size_t k = 1; k < tok.size(); ++k) {
            if (!std::isdigit(static_cast<unsigned char>(tok[k])))
                throw ParseError("malformed generator index in '" + std::string(tok) + "'");
            idx = idx * 10 + (tok[k] - '0');
            if (idx > 100000) throw ParseError("generator index too large");
        }
        if (idx < 1) throw ParseError("generator indices start at 1");
        l.index = idx;
        return l;
    }

    void reduce() {
        std::vector<Letter> out;
        out.reserve(letters_.size());
        for (const Letter& l : letters_) {
            if (!out.empty() && out.back().cancels(l))
                out.pop_back();
            else
                out.push_back(l);
        }
        letters_ = std::move(out);
    }

    std::vector<Letter> letters_;
};

inline Word a(int i) { return Word::generator(GenKind::A, i); }
inline Word b(int i) { return Word::generator(GenKind::B, i); }
inline Word c(int j) { return Word::generator(GenKind::C, j); }

/// [x, y] = x y x^-1 y^-1
inline Word commutator(const Word& x, const Word& y) { return x * y * x.inverse() * y.inverse(); }

/// Strips cancelling first/last letter pairs (conjugation).
inline Word cyclically_reduced(const Word& w) {
    const auto& ls = w.letters();
    std::size_t lo = 0, hi = ls.size();
    while (hi - lo >= 2 && ls[lo].cancels(ls[hi - 1])) {
        ++lo;
        --hi;
    }
    return Word(std::vector<Letter>(ls.begin() + static_cast<std::ptrdiff_t>(lo),
                                    ls.begin() + static_cast<std::ptrdiff_t>(hi)));
}

// ---------------------------------------------------------------------------

struct Presentation {
    int genus = 0;
    int punctures = 3;

    Presentation() = default;
    Presentation(int g, int n) : genus(g), punctures(n) {
        if (g < 0 || n < 0) throw InvalidPresentation("genus and punctures must be non-negative");
        if (g == 0 && n <= 1)
            throw InvalidPresentation("a sphere with at most one puncture has trivial fundamental group");
    }

    int generator_count() const { return 2 * genus + punctures; }

    /// Position of a generator in the order a_1..a_g, b_1..b_g, c_1..c_n.
    int generator_index(GenKind kind, int index) const {
        const int bound = kind == GenKind::C ? punctures : genus;
        if (index < 1 || index > bound) {
            const char ch = kind == GenKind::A ? 'a' : kind == GenKind::B ? 'b' : 'c';
            throw UnknownSymbol(std::string(1, ch) + std::to_string(index) +
                                " is not a generator of this presentation");
        }
        switch (kind) {
            case GenKind::A: return index - 1;
            case GenKind::B: return genus + index - 1;
            case GenKind::C: return 2 * genus + index - 1;
        }
        return -1;
    }

    std::vector<Word> generators() const {
        std::vector<Word> out;
        for (int i = 1; i <= genus; ++i) out.push_back(a(i));
        for (int i = 1; i <= genus; ++i) out.push_back(b(i));
        for (int j = 1; j <= punctures; ++j) out.push_back(c(j));
        return out;
    }

    std::string generator_name(int position) const {
        if (position < genus) return "a" + std::to_string(position + 1);
        if (position < 2 * genus) return "b" + std::to_string(position - genus + 1);
        return "c" + std::to_string(position - 2 * genus + 1);
    }

    friend bool operator==(const Presentation&, const Presentation&) = default;
};

inline void validate_word(const Word& w, const Presentation& p) {
    for (const Letter& l : w.letters()) (void)p.generator_index(l.kind, l.index);
}

/// prod_i [a_i, b_i] * c_n^-1 ... c_1^-1
inline Word relation_word(const Presentation& p) {
    Word w;
    for (int i = 1; i <= p.genus; ++i) w = w * commutator(a(i), b(i));
    for (int j = p.punctures; j >= 1; --j) w = w * c(j).inverse();
    return w;
}

/// c_i c_{i+1} ... c_j (indices 1-based, inclusive, non-cyclic).
inline Word peripheral_product(int first, int last) {
    Word w;
    for (int m = first; m <= last; ++m) w = w * c(m);
    return w;
}

/// Signed exponent sums in generator order a, b, c.
inline std::vector<int> abelianize(const Word& w, const Presentation& p) {
    std::vector<int> e(static_cast<std::size_t>(p.generator_count()), 0);
    for (const Letter& l : w.letters()) {
        e[static_cast<std::size_t>(p.generator_index(l.kind, l.index))] += l.inverse ? -1 : 1;
    }
    return e;
}

namespace detail {
inline bool is_proper_indicator(const std::vector<int>& v) {
    int ones = 0;
    for (int x : v) {
        if (x != 0 && x != 1) return false;
        ones += x;
    }
    return ones >= 1 && ones <= static_cast<int>(v.size()) - 1;
}
}  // namespace detail

/// Necessary abelianization condition for a genus-0 word to be a simple
/// closed curve: w or w^-1 equals some c_{i1}...c_{ik}, 1 <= k <= n-1, modulo
/// the all-ones relation vector.
inline bool scc_admissible_genus0(const Word& w, const Presentation& p) {
    if (p.genus != 0) throw WrongGenus("scc_admissible_genus0 requires genus 0");
    const std::vector<int> e = abelianize(w, p);
    const int lo = *std::min_element(e.begin(), e.end());
    const int hi = *std::max_element(e.begin(), e.end());
    std::vector<int> fwd(e.size()), bwd(e.size());
    for (std::size_t k = 0; k < e.size(); ++k) {
        fwd[k] = e[k] - lo;
        bwd[k] = hi - e[k];
    }
    return detail::is_proper_indicator(fwd) || detail::is_proper_indicator(bwd);
}

// ---------------------------------------------------------------------------
// Dehn twists on punctured spheres

struct TwistWindow {
    int first = 1;
    int last = 2;
    friend bool operator==(const TwistWindow&, const TwistWindow&) = default;
};

inline void check_window(const TwistWindow& win, const Presentation& p) {
    if (p.genus != 0) throw WrongGenus("Dehn twist windows are defined for genus 0 only");
    const int span = win.last - win.first;
    if (win.first < 1 || win.last > p.punctures || span < 1 || span > p.punctures - 2)
        throw InvalidWindow("window c" + std::to_string(win.first) + "..c" +
                            std::to_string(win.last) + " is not a valid twist window");
}

inline std::vector<TwistWindow> twist_windows(const Presentation& p) {
    std::vector<TwistWindow> out;
    for (int i = 1; i <= p.punctures; ++i)
        for (int j = i + 1; j <= p.punctures && j - i <= p.punctures - 2; ++j) out.push_back({i, j});
    return out;
}

/// Twist along the curve gamma = c_first ... c_last: every c_m inside the
/// window becomes gamma^-k c_m gamma^k, the other generators are fixed.
inline Word dehn_twist_genus0(const Word& w, const TwistWindow& win, int power,
                              const Presentation& p) {
    check_window(win, p);
    validate_word(w, p);
    if (power == 0) return w;
    const Word gk = peripheral_product(win.first, win.last).pow(power);
    const Word gk_inv = gk.inverse();
    std::vector<Letter> out;
    for (const Letter& l : w.letters()) {
        const bool inside = l.kind == GenKind::C && l.index >= win.first && l.index <= win.last;
        if (!inside) {
            out.push_back(l);
            continue;
        }
        const Word img = gk_inv * Word({l}) * gk;
        out.insert(out.end(), img.letters().begin(), img.letters().end());
    }
    return Word(std::move(out));
}

// ---------------------------------------------------------------------------
// Free homotopy classes

/// Free homotopy class of a closed curve, keyed by a canonical word.
///
/// When n >= 1 the group is free on the generators other than c_n; the normal
/// form substitutes c_n = (c_1...c_{n-1})^-1 prod[a_i, b_i], cyclically
/// reduces, and takes the lexicographically least word among the cyclic
/// rotations of the result and of its inverse.
struct CurveClass {
    Word representative;
    Word normal_form;

    static CurveClass of(const Word& w, const Presentation& p) {
        validate_word(w, p);
        return {w, canonical(w, p)};
    }

    std::string to_string() const { return representative.to_string(); }

    friend bool operator==(const CurveClass& x, const CurveClass& y) {
        return x.normal_form == y.normal_form;
    }

    std::vector<int> key() const {
        std::vector<int> k;
        k.reserve(normal_form.size());
        for (const Letter& l : normal_form.letters()) k.push_back(l.key());
        return k;
    }

    static Word canonical(const Word& w, const Presentation& p) {
        Word x = w;
        if (p.punctures >= 1) {
            Word rel_prod;
            for (int i = 1; i <= p.genus; ++i) rel_prod = rel_prod * commutator(a(i), b(i));
            const Word cn = peripheral_product(1, p.punctures - 1).inverse() * rel_prod;
            std::vector<Letter> out;
            for (const Letter& l : x.letters()) {
                if (l.kind == GenKind::C && l.index == p.punctures) {
                    const Word img = l.inverse ? cn.inverse() : cn;
                    out.insert(out.end(), img.letters().begin(), img.letters().end());
                } else {
                    out.push_back(l);
                }
            }
            x = Word(std::move(out));
        }
        x = cyclically_reduced(x);
        if (x.empty()) return x;
        std::vector<Letter> best;
        auto consider = [&best](const std::vector<Letter>& ls) {
            const std::size_t n = ls.size();
            for (std::size_t s = 0; s < n; ++s) {
                std::vector<Letter> rot;
                rot.reserve(n);
                for (std::size_t k = 0; k < n; ++k) rot.push_back(ls[(s + k) % n]);
                if (best.empty() || std::lexicographical_compare(
                                        rot.begin(), rot.end(), best.begin(), best.end(),
                                        [](const Letter& u, const Letter& v) { return u.key() < v.key(); }))
                    best = std::move(rot);
            }
        };
        consider(x.letters());
        consider(x.inverse().letters());
        // a rotation of a cyclically reduced word is freely reduced
        return Word(std::move(best));
    }
};

/// Words known to represent simple closed curves, deduplicated by class and
/// kept in first-seen order.
inline std::vector<CurveClass> scc_seed_family(const Presentation& p) {
    std::vector<CurveClass> out;
    std::set<std::vector<int>> seen;
    auto add = [&](const Word& w) {
        CurveClass cc = CurveClass::of(w, p);
        if (cc.normal_form.empty()) return;
        if (seen.insert(cc.key()).second) out.push_back(std::move(cc));
    };
    const int g = p.genus, n = p.punctures;
    for (int j = 1; j <= n; ++j) add(c(j));
    for (int i = 1; i <= g; ++i) {
        add(a(i));
        add(b(i));
    }
    if (g >= 1 && (g >= 2 || n >= 1)) {
        for (int i = 1; i <= g; ++i) add(commutator(a(i), b(i)));
    }
    if (g >= 2) {
        for (int i = 1; i <= g; ++i) {
            for (int j = 1; j <= g; ++j) {
                if (i == j) continue;
                const Word ai = a(i), bi = b(i), aj = a(j), bj = b(j);
                add(commutator(ai, bi));
                add(commutator(aj, bj));
                add(commutator(bi.inverse() * bj.inverse(), ai));
                add(commutator(ai.inverse() * aj.inverse(), bj));
                add(commutator(bj.inverse() * bi.inverse(), aj));
                add(commutator(aj.inverse() * ai.inverse(), bj));
                add(commutator(bi * ai.inverse() * bj, aj));
                add(commutator(ai * bi.inverse() * aj, bj));
            }
        }
    }
    if (g >= 1 && n >= 1) {
        for (int i = 1; i <= g; ++i) {
            const Word ai = a(i), bi = b(i), ci = commutator(ai, bi);
            for (int j = 1; j <= n; ++j) {
                add(ai.inverse() * ci * c(j).inverse() * ai * c(j));
                add(bi * ci * c(j).inverse() * bi.inverse() * c(j));
            }
            for (int j = 1; j <= n; ++j) {
                for (int k = 1; k < j; ++k) {
                    add(bi * c(k) * bi.inverse() * c(j) * bi * ai.inverse() * bi.inverse() *
                        c(k).inverse() * bi.inverse() * c(j).inverse());
                }
            }
        }
    }
    if (g == 0 && n >= 4) {
        for (int len = 2; len <= n - 2; ++len) {
            for (int s = 1; s <= n; ++s) {
                Word w;
                for (int k = 0; k < len; ++k) w = w * c((s - 1 + k) % n + 1);
                add(w);
            }
        }
        for (int i = 1; i <= n - 3; ++i) add(peripheral_product(1, i + 1).inverse());
    }
    return out;
}

/// Pants curve b_i = (c_1 ... c_{i+1})^-1 of the chained pants decomposition.
inline Word pants_word(int i) { return peripheral_product(1, i + 1).inverse(); }

// ---------------------------------------------------------------------------
// Enumeration

struct SccBudget {
    int max_curves = 500;
    int max_twist_depth = 3;
    int max_word_length = 64;

    friend bool operator==(const SccBudget&, const SccBudget&) = default;
};

/// Breadth-first closure of the seed family under twists along consecutive
/// windows with powers +-1. Deterministic given (presentation, budget, seed).
class SccEnumerator {
public:
    SccEnumerator(const Presentation& p, const SccBudget& budget, std::uint64_t seed = 0)
        : presentation_(p), budget_(budget) {
        if (p.genus != 0) throw WrongGenus("enumeration is implemented for punctured spheres");
        if (p.punctures < 3) throw PreconditionError("enumeration needs at least three punctures");
        if (budget.max_curves <= 0 || budget.max_word_length <= 0 || budget.max_twist_depth < 0)
            throw BudgetZero("enumeration budget must be positive");
        for (const TwistWindow& w : twist_windows(p)) {
            moves_.push_back({w, +1});
            moves_.push_back({w, -1});
        }
        std::mt19937_64 rng(seed);
        std::shuffle(moves_.begin(), moves_.end(), rng);
        for (CurveClass& cc : scc_seed_family(p)) admit(std::move(cc), 0);
    }

    std::optional<CurveClass> next() {
        if (emitted_ >= budget_.max_curves || queue_.empty()) return std::nullopt;
        Item item = std::move(queue_.front());
        queue_.pop_front();
        if (item.depth < budget_.max_twist_depth) {
            const Word base = cyclically_reduced(item.curve.representative);
            for (const Move& mv : moves_) {
                Word img = dehn_twist_genus0(base, mv.window, mv.power, presentation_);
                admit(CurveClass::of(img, presentation_), item.depth + 1);
            }
        }
        ++emitted_;
        return std::move(item.curve);
    }

    std::vector<CurveClass> take_all() {
        std::vector<CurveClass> out;
        while (auto cc = next()) out.push_back(std::move(*cc));
        return out;
    }

    int emitted() const { return emitted_; }

private:
    struct Move {
        TwistWindow window;
        int power;
    };
    struct Item {
        CurveClass curve;
        int depth;
    };

    void admit(CurveClass cc, int depth) {
        if (cc.normal_form.empty()) return;
        if (static_cast<int>(cc.normal_form.size()) > budget_.max_word_length) return;
        if (!scc_admissible_genus0(cc.representative, presentation_)) return;
        if (!seen_.insert(cc.key()).second) return;
        queue_.push_back({std::move(cc), depth});
    }

    Presentation presentation_;
    SccBudget budget_;
    std::vector<Move> moves_;
    std::deque<Item> queue_;
    std::set<std::vector<int>> seen_;
    int emitted_ = 0;
};

inline std::vector<CurveClass> enumerate_scc(const Presentation& p, const SccBudget& budget,
                                             std::uint64_t seed = 0) {
    return SccEnumerator(p, budget, seed).take_all();
}

}  // namespace telliptic
