#include "walls/series.hpp"

#include <algorithm>
#include <sstream>

namespace walls {

std::shared_ptr<const ClassContext> ClassContext::make(std::vector<std::string> labels, std::vector<int> weights) {
    auto ctx = std::make_shared<ClassContext>();
    if (weights.empty()) weights.assign(labels.size(), 1);
    if (weights.size() != labels.size()) throw Error("BadContext", "one weight per label required");
    for (int w : weights)
        if (w <= 0) throw Error("BadContext", "label weights must be positive");
    for (size_t i = 0; i < labels.size(); ++i)
        for (size_t j = i + 1; j < labels.size(); ++j)
            if (labels[i] == labels[j]) throw Error("BadContext", "duplicate label " + labels[i]);
    ctx->labels_ = std::move(labels);
    ctx->weights_ = std::move(weights);
    return ctx;
}

int ClassContext::index_of(const std::string& label) const {
    for (size_t i = 0; i < labels_.size(); ++i)
        if (labels_[i] == label) return int(i);
    throw Error("UnknownClass", "label " + label + " not in context");
}

int ClassVec::order(const ClassContext& ctx) const {
    int s = 0;
    for (size_t i = 0; i < e.size(); ++i) s += e[i] * ctx.weights()[i];
    return s;
}

bool ClassVec::nonnegative() const {
    return std::all_of(e.begin(), e.end(), [](int v) { return v >= 0; });
}

bool ClassVec::is_zero() const {
    return std::all_of(e.begin(), e.end(), [](int v) { return v == 0; });
}

ClassVec operator+(const ClassVec& a, const ClassVec& b) {
    ClassVec r(a.e.size());
    for (size_t i = 0; i < a.e.size(); ++i) r.e[i] = a.e[i] + b.e[i];
    return r;
}

ClassVec operator-(const ClassVec& a, const ClassVec& b) {
    ClassVec r(a.e.size());
    for (size_t i = 0; i < a.e.size(); ++i) r.e[i] = a.e[i] - b.e[i];
    return r;
}

TruncatedSeries::TruncatedSeries(ContextPtr ctx, int cap) : ctx_(std::move(ctx)), cap_(cap) {
    if (cap_ < 0) throw Error("BadContext", "negative order cap");
}

TruncatedSeries TruncatedSeries::one(ContextPtr ctx, int cap) {
    TruncatedSeries s(std::move(ctx), cap);
    s.add_term(Rat(1), {0, 0}, ClassVec(s.ctx_->size()));
    return s;
}

TruncatedSeries TruncatedSeries::monomial(ContextPtr ctx, int cap, const Rat& c, LatticeVector m, ClassVec q) {
    TruncatedSeries s(std::move(ctx), cap);
    s.add_term(c, m, std::move(q));
    return s;
}

bool TruncatedSeries::is_one() const {
    return terms_.size() == 1 && constant_term().is_one();
}

Rat TruncatedSeries::coeff(LatticeVector m, const ClassVec& q) const {
    Key k{q.order(*ctx_), m, q};
    auto it = terms_.find(k);
    return it == terms_.end() ? Rat(0) : it->second;
}

Rat TruncatedSeries::constant_term() const { return coeff({0, 0}, ClassVec(ctx_->size())); }

void TruncatedSeries::add_term(const Rat& c, LatticeVector m, ClassVec q) {
    if (c.is_zero()) return;
    if (q.e.size() != ctx_->size()) throw Error("ContextMismatch", "class vector length mismatch");
    if (!q.nonnegative()) throw Error("BadExponent", "negative class exponent");
    int ord = q.order(*ctx_);
    if (ord > cap_) return;
    Key k{ord, m, std::move(q)};
    auto [it, inserted] = terms_.emplace(std::move(k), c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

void TruncatedSeries::require_same_shape_(const TruncatedSeries& o) const {
    if (cap_ != o.cap_) throw Error("ContextMismatch", "series caps differ");
    if (ctx_ == o.ctx_) return;
    if (!ctx_ || !o.ctx_ || !(*ctx_ == *o.ctx_))
        throw Error("ContextMismatch", "series contexts differ");
}

TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b) {
    a.require_same_shape_(b);
    TruncatedSeries r = a;
    for (const auto& [k, c] : b.terms_) r.add_term(c, k.m, k.q);
    return r;
}

TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b) {
    a.require_same_shape_(b);
    TruncatedSeries r = a;
    for (const auto& [k, c] : b.terms_) r.add_term(-c, k.m, k.q);
    return r;
}

TruncatedSeries TruncatedSeries::operator-() const {
    TruncatedSeries r(ctx_, cap_);
    for (const auto& [k, c] : terms_) r.terms_.emplace(k, -c);
    return r;
}

TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
    a.require_same_shape_(b);
    TruncatedSeries r(a.ctx_, a.cap_);
    for (const auto& [ka, ca] : a.terms_) {
        for (const auto& [kb, cb] : b.terms_) {
            if (ka.ord + kb.ord > a.cap_) break;  // keys are order-sorted
            r.add_term(ca * cb, ka.m + kb.m, ka.q + kb.q);
        }
    }
    return r;
}

bool operator==(const TruncatedSeries& a, const TruncatedSeries& b) {
    a.require_same_shape_(b);
    return a.terms_ == b.terms_;
}

TruncatedSeries TruncatedSeries::inverse() const {
    if (!constant_term().is_one()) throw Error("NotInvertible", "inverse needs constant term 1");
    TruncatedSeries g = *this;
    g.add_term(Rat(-1), {0, 0}, ClassVec(ctx_->size()));  // g = f - 1
    for (const auto& [k, c] : g.terms_)
        if (k.ord == 0) throw Error("NotInvertible", "non-constant order-zero term");
    TruncatedSeries acc = one(ctx_, cap_);
    TruncatedSeries pw = one(ctx_, cap_);
    for (int i = 1; i <= cap_; ++i) {
        pw = pw * g;
        if (pw.is_zero()) break;
        if (i % 2 == 1)
            acc -= pw;
        else
            acc += pw;
    }
    return acc;
}

TruncatedSeries TruncatedSeries::power(long long n) const {
    if (n == 0) return one(ctx_, cap_);
    TruncatedSeries base = n > 0 ? *this : inverse();
    unsigned long long k = n > 0 ? (unsigned long long)n : (unsigned long long)(-n);
    TruncatedSeries acc = one(ctx_, cap_);
    while (k) {
        if (k & 1) acc *= base;
        base = base * base;
        k >>= 1;
    }
    return acc;
}

TruncatedSeries TruncatedSeries::log1p() const {
    if (!constant_term().is_one()) throw Error("BadConstantTerm", "log needs constant term 1");
    TruncatedSeries g = *this;
    g.add_term(Rat(-1), {0, 0}, ClassVec(ctx_->size()));
    for (const auto& [k, c] : g.terms_)
        if (k.ord == 0) throw Error("BadConstantTerm", "log needs positive-order tail");
    TruncatedSeries acc(ctx_, cap_);
    TruncatedSeries pw = one(ctx_, cap_);
    for (int i = 1; i <= cap_; ++i) {
        pw = pw * g;
        if (pw.is_zero()) break;
        TruncatedSeries term = pw;
        for (auto& [k, c] : term.terms_) c = c * Rat(i % 2 == 1 ? 1 : -1, i);
        acc += term;
    }
    return acc;
}

TruncatedSeries TruncatedSeries::exp() const {
    if (!constant_term().is_zero()) throw Error("BadConstantTerm", "exp needs constant term 0");
    for (const auto& [k, c] : terms_)
        if (k.ord == 0) throw Error("BadConstantTerm", "exp needs positive-order input");
    TruncatedSeries acc = one(ctx_, cap_);
    TruncatedSeries pw = one(ctx_, cap_);
    Rat fact(1);
    for (int i = 1; i <= cap_; ++i) {
        pw = pw * (*this);
        if (pw.is_zero()) break;
        fact = fact * Rat(i);
        TruncatedSeries term = pw;
        for (auto& [k, c] : term.terms_) c = c / fact;
        acc += term;
    }
    return acc;
}

TruncatedSeries TruncatedSeries::truncated(int new_cap) const {
    if (new_cap > cap_) throw Error("BadContext", "cannot raise a truncation cap");
    TruncatedSeries r(ctx_, new_cap);
    for (const auto& [k, c] : terms_) {
        if (k.ord > new_cap) break;
        r.terms_.emplace(k, c);
    }
    return r;
}

TruncatedSeries TruncatedSeries::substitute(const TruncatedSeries& ix, const TruncatedSeries& iy) const {
    require_same_shape_(ix);
    require_same_shape_(iy);
    TruncatedSeries r(ctx_, cap_);
    // cache integer powers of the images (and of their inverses)
    std::map<long long, TruncatedSeries> px, py;
    auto pow_of = [&](const TruncatedSeries& base, std::map<long long, TruncatedSeries>& cache, long long e) {
        auto it = cache.find(e);
        if (it != cache.end()) return it->second;
        TruncatedSeries v = [&] {
            if (e >= 0) return base.power(e);
            // invert monomial*unit: peel the minimal-order lattice monomial
            auto lead = base.terms_.begin();
            if (lead == base.terms_.end()) throw Error("NotInvertible", "zero substitution image");
            Rat c0 = lead->second;
            LatticeVector m0 = lead->first.m;
            if (!lead->first.q.is_zero())
                throw Error("NotInvertible", "image is not a monomial times a unit");
            TruncatedSeries unit(ctx_, cap_);
            for (const auto& [k, c] : base.terms_) unit.add_term(c / c0, k.m - m0, k.q);
            TruncatedSeries inv_unit = unit.inverse();
            TruncatedSeries neg = monomial(ctx_, cap_, Rat(1) / c0, -m0, ClassVec(ctx_->size())) * inv_unit;
            TruncatedSeries acc = one(ctx_, cap_);
            for (long long i = 0; i < -e; ++i) acc *= neg;
            return acc;
        }();
        cache.emplace(e, v);
        return v;
    };
    for (const auto& [k, c] : terms_) {
        TruncatedSeries term = monomial(ctx_, cap_, c, {0, 0}, k.q);
        if (k.m.x != 0) term *= pow_of(ix, px, k.m.x);
        if (k.m.y != 0) term *= pow_of(iy, py, k.m.y);
        r += term;
    }
    return r;
}

TruncatedSeries TruncatedSeries::dlog(LatticeVector n) const {
    TruncatedSeries r(ctx_, cap_);
    for (const auto& [k, c] : terms_) r.add_term(c * Rat(dot(n, k.m)), k.m, k.q);
    return r;
}

TruncatedSeries TruncatedSeries::collapse_labels(const std::vector<std::string>& labels) const {
    std::vector<bool> drop(ctx_->size(), false);
    for (const auto& l : labels) drop[ctx_->index_of(l)] = true;
    std::vector<std::string> kept;
    std::vector<int> kept_w;
    for (size_t i = 0; i < ctx_->size(); ++i)
        if (!drop[i]) {
            kept.push_back(ctx_->labels()[i]);
            kept_w.push_back(ctx_->weights()[i]);
        }
    auto nctx = ClassContext::make(kept, kept_w);
    TruncatedSeries r(nctx, cap_);
    for (const auto& [k, c] : terms_) {
        ClassVec q(nctx->size());
        size_t j = 0;
        for (size_t i = 0; i < ctx_->size(); ++i)
            if (!drop[i]) q.e[j++] = k.q.e[i];
        r.add_term(c, k.m, std::move(q));
    }
    return r;
}

std::string format_monomial(const ClassContext& ctx, const Rat& c, LatticeVector m, const ClassVec& q) {
    std::ostringstream os;
    bool unit = true;
    os << c.str();
    auto app = [&](const std::string& base, long long e) {
        if (e == 0) return;
        os << "*" << base;
        if (e != 1) os << "^" << e;
        unit = false;
    };
    app("x", m.x);
    app("y", m.y);
    for (size_t i = 0; i < ctx.size(); ++i) app(ctx.labels()[i], q.e[i]);
    (void)unit;
    return os.str();
}

std::string TruncatedSeries::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, c] : terms_) {
        if (!first) os << " + ";
        os << format_monomial(*ctx_, c, k.m, k.q);
        first = false;
    }
    return os.str();
}

}  // namespace walls
