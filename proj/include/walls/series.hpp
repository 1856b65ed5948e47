#ifndef WALLS_SERIES_HPP
#define WALLS_SERIES_HPP

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "walls/lattice.hpp"
#include "walls/rational.hpp"

namespace walls {

// Fixed ordered list of curve-class labels with positive integer weights.
// The weighted exponent sum of a term is its order; series are truncated at
// a total order cap.
class ClassContext {
  public:
    static std::shared_ptr<const ClassContext> make(std::vector<std::string> labels,
                                                    std::vector<int> weights = {});
    const std::vector<std::string>& labels() const { return labels_; }
    const std::vector<int>& weights() const { return weights_; }
    size_t size() const { return labels_.size(); }
    int index_of(const std::string& label) const;  // throws UnknownClass
    friend bool operator==(const ClassContext& a, const ClassContext& b) {
        return a.labels_ == b.labels_ && a.weights_ == b.weights_;
    }

  private:
    std::vector<std::string> labels_;
    std::vector<int> weights_;
};

using ContextPtr = std::shared_ptr<const ClassContext>;

// Exponent vector over the context labels (componentwise nonnegative).
struct ClassVec {
    std::vector<int> e;

    ClassVec() = default;
    explicit ClassVec(size_t n) : e(n, 0) {}
    int order(const ClassContext& ctx) const;
    bool nonnegative() const;
    bool is_zero() const;
    friend ClassVec operator+(const ClassVec& a, const ClassVec& b);
    friend ClassVec operator-(const ClassVec& a, const ClassVec& b);
    friend bool operator==(const ClassVec& a, const ClassVec& b) { return a.e == b.e; }
    friend bool operator<(const ClassVec& a, const ClassVec& b) { return a.e < b.e; }
};

struct Monomial {
    LatticeVector m;  // lattice exponent, may be negative
    ClassVec q;       // class exponent, componentwise >= 0
    friend bool operator==(const Monomial& a, const Monomial& b) { return a.m == b.m && a.q == b.q; }
};

// Finitely supported sum of rational multiples of z^m t^q, truncated at a
// total class order cap. Lattice exponents are unconstrained.
class TruncatedSeries {
  public:
    TruncatedSeries() = default;
    TruncatedSeries(ContextPtr ctx, int cap);
    static TruncatedSeries one(ContextPtr ctx, int cap);
    static TruncatedSeries monomial(ContextPtr ctx, int cap, const Rat& c, LatticeVector m, ClassVec q);

    const ContextPtr& context() const { return ctx_; }
    int cap() const { return cap_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_one() const;
    size_t term_count() const { return terms_.size(); }

    Rat coeff(LatticeVector m, const ClassVec& q) const;
    Rat constant_term() const;

    void add_term(const Rat& c, LatticeVector m, ClassVec q);

    friend TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b);
    friend TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b);
    friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b);
    TruncatedSeries operator-() const;
    friend bool operator==(const TruncatedSeries& a, const TruncatedSeries& b);

    TruncatedSeries& operator+=(const TruncatedSeries& o) { return *this = *this + o; }
    TruncatedSeries& operator-=(const TruncatedSeries& o) { return *this = *this - o; }
    TruncatedSeries& operator*=(const TruncatedSeries& o) { return *this = *this * o; }

    // f^n; negative n inverts via the geometric series, which requires
    // constant term 1 and positive-order non-constant part.
    TruncatedSeries power(long long n) const;
    TruncatedSeries inverse() const;

    TruncatedSeries log1p() const;  // log of 1 + (this - 1); constant term must be 1
    TruncatedSeries exp() const;    // constant term must be 0

    TruncatedSeries truncated(int new_cap) const;

    // Ring morphism z^(1,0) -> ix, z^(0,1) -> iy. Images must be invertible
    // monomial-times-unit series when negative lattice exponents occur.
    TruncatedSeries substitute(const TruncatedSeries& ix, const TruncatedSeries& iy) const;

    // d log derivative along a lattice functional: z^m t^q -> <n,m> z^m t^q.
    TruncatedSeries dlog(LatticeVector n) const;

    // Maps every listed label's exponent into the constant 1 (drops the
    // label), merging terms; used for limit specialisations.
    TruncatedSeries collapse_labels(const std::vector<std::string>& labels) const;

    // Deterministic rendering: by total class order, then lattice exponent,
    // then class exponent.
    std::string str() const;

    template <typename F>
    void for_each(F&& f) const {
        for (const auto& [k, c] : terms_) f(c, k.m, k.q);
    }

  private:
    struct Key {
        int ord;
        LatticeVector m;
        ClassVec q;
        friend bool operator<(const Key& a, const Key& b) {
            if (a.ord != b.ord) return a.ord < b.ord;
            if (!(a.m == b.m)) return a.m < b.m;
            return a.q < b.q;
        }
        friend bool operator==(const Key& a, const Key& b) {
            return a.ord == b.ord && a.m == b.m && a.q == b.q;
        }
    };
    void require_same_shape_(const TruncatedSeries& o) const;

    ContextPtr ctx_;
    int cap_ = 0;
    std::map<Key, Rat> terms_;
};

std::string format_monomial(const ClassContext& ctx, const Rat& c, LatticeVector m, const ClassVec& q);

}  // namespace walls

#endif
