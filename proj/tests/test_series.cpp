#include <random>

#include "doctest.h"
#include "walls/series.hpp"

using namespace walls;

namespace {

ContextPtr ctx1() { return ClassContext::make({"s"}); }

TruncatedSeries sx(ContextPtr c, int cap) {
    ClassVec q(1);
    q.e[0] = 1;
    auto s = TruncatedSeries::one(c, cap);
    s.add_term(Rat(1), {1, 0}, q);
    return s;  // 1 + s*x
}

TruncatedSeries random_series(ContextPtr c, int cap, std::mt19937& rng) {
    std::uniform_int_distribution<int> coef(-4, 4), lat(-2, 2), cls(0, 2);
    TruncatedSeries s(c, cap);
    for (int i = 0; i < 6; ++i) {
        ClassVec q(c->size());
        for (auto& e : q.e) e = cls(rng);
        s.add_term(Rat(coef(rng)), {lat(rng), lat(rng)}, q);
    }
    return s;
}

}  // namespace

TEST_CASE("product of simple unit series") {
    auto c = ClassContext::make({"s"});
    int cap = 4;
    ClassVec q(1);
    q.e[0] = 1;
    auto f = TruncatedSeries::one(c, cap);
    f.add_term(Rat(1), {1, 0}, q);  // 1 + s x
    auto g = TruncatedSeries::one(c, cap);
    g.add_term(Rat(1), {0, 1}, q);  // 1 + s y
    auto fg = f * g;
    CHECK(fg.coeff({0, 0}, ClassVec(1)).is_one());
    CHECK(fg.coeff({1, 0}, q).is_one());
    CHECK(fg.coeff({0, 1}, q).is_one());
    ClassVec q2(1);
    q2.e[0] = 2;
    CHECK(fg.coeff({1, 1}, q2).is_one());
    CHECK(fg.term_count() == 4);
}

TEST_CASE("multiplying by one is the identity") {
    std::mt19937 rng(7);
    auto c = ClassContext::make({"s", "t"});
    auto f = random_series(c, 3, rng);
    CHECK(f * TruncatedSeries::one(c, 3) == f);
}

TEST_CASE("truncation drops high order terms in products") {
    auto c = ctx1();
    int cap = 2;
    ClassVec q1(1);
    q1.e[0] = 1;
    ClassVec q2(1);
    q2.e[0] = 2;
    auto f = TruncatedSeries::one(c, cap);
    f.add_term(Rat(1), {1, 0}, q1);  // 1 + s x
    auto g = TruncatedSeries::one(c, cap);
    g.add_term(Rat(-1), {1, 0}, q1);
    g.add_term(Rat(1), {2, 0}, q2);  // 1 - s x + s^2 x^2
    CHECK((f * g).is_one());         // order-3 term truncated away
}

TEST_CASE("geometric inverse") {
    auto c = ctx1();
    auto f = sx(c, 3);
    auto inv = f.power(-1);
    ClassVec q(1);
    for (int k = 1; k <= 3; ++k) {
        q.e[0] = k;
        CHECK(inv.coeff({k, 0}, q) == Rat(k % 2 ? -1 : 1));
    }
    CHECK((f * inv).is_one());
}

TEST_CASE("power basics") {
    auto c = ctx1();
    auto f = sx(c, 3);
    CHECK(f.power(0).is_one());
    auto sq = f.power(2);
    ClassVec q1(1), q2(1);
    q1.e[0] = 1;
    q2.e[0] = 2;
    CHECK(sq.coeff({1, 0}, q1) == Rat(2));
    CHECK(sq.coeff({2, 0}, q2) == Rat(1));
    TruncatedSeries not_unit(c, 3);
    not_unit.add_term(Rat(2), {0, 0}, ClassVec(1));
    CHECK_THROWS_WITH_AS(not_unit.power(-1), doctest::Contains("NotInvertible"), Error);
}

TEST_CASE("log of 1 + s x is the Mercator series") {
    auto c = ctx1();
    auto l = sx(c, 3).log1p();
    ClassVec q(1);
    q.e[0] = 1;
    CHECK(l.coeff({1, 0}, q) == Rat(1));
    q.e[0] = 2;
    CHECK(l.coeff({2, 0}, q) == Rat(-1, 2));
    q.e[0] = 3;
    CHECK(l.coeff({3, 0}, q) == Rat(1, 3));
}

TEST_CASE("exp of zero is one, exp(log(f)) = f") {
    auto c = ctx1();
    CHECK(TruncatedSeries(c, 4).exp().is_one());
    ClassVec q(1);
    q.e[0] = 1;
    auto f = TruncatedSeries::one(c, 4);
    f.add_term(Rat(1), {1, 0}, q);
    f.add_term(Rat(1), {0, 1}, q);  // 1 + s x + s y
    CHECK(f.log1p().exp() == f);
    auto g = TruncatedSeries(c, 4);
    g.add_term(Rat(1), {1, 0}, q);
    g.add_term(Rat(-2), {0, -1}, q);
    CHECK(g.exp().log1p() == g);
    auto bad = TruncatedSeries::one(c, 4);
    CHECK_THROWS_WITH_AS(bad.exp(), doctest::Contains("BadConstantTerm"), Error);
}

TEST_CASE("ring laws on random series") {
    std::mt19937 rng(11);
    auto c = ClassContext::make({"s", "t"});
    for (int i = 0; i < 25; ++i) {
        auto a = random_series(c, 3, rng);
        auto b = random_series(c, 3, rng);
        auto d = random_series(c, 3, rng);
        CHECK(a * b == b * a);
        CHECK((a * b) * d == a * (b * d));
        CHECK(a * (b + d) == a * b + a * d);
    }
}

TEST_CASE("truncation is a ring homomorphism") {
    std::mt19937 rng(13);
    auto c = ClassContext::make({"s", "t"});
    for (int i = 0; i < 20; ++i) {
        auto a = random_series(c, 4, rng);
        auto b = random_series(c, 4, rng);
        for (int k = 0; k <= 4; ++k) {
            CHECK((a * b).truncated(k) == (a.truncated(k) * b.truncated(k)).truncated(k));
        }
    }
}

TEST_CASE("context mismatch is rejected") {
    auto c1 = ClassContext::make({"s"});
    auto c2 = ClassContext::make({"t"});
    auto f = TruncatedSeries::one(c1, 3);
    auto g = TruncatedSeries::one(c2, 3);
    CHECK_THROWS_WITH_AS(f * g, doctest::Contains("ContextMismatch"), Error);
    auto h = TruncatedSeries::one(c1, 2);
    CHECK_THROWS_WITH_AS(f + h, doctest::Contains("ContextMismatch"), Error);
}

TEST_CASE("weighted labels change the grading") {
    auto c = ClassContext::make({"s", "T"}, {1, 3});
    TruncatedSeries f = TruncatedSeries::one(c, 3);
    ClassVec q(2);
    q.e[1] = 1;  // weight 3 term
    f.add_term(Rat(1), {1, 0}, q);
    ClassVec q2(2);
    q2.e[1] = 2;  // weight 6 > cap: silently dropped
    f.add_term(Rat(1), {2, 0}, q2);
    CHECK(f.term_count() == 2);
}

TEST_CASE("deterministic rendering sorted by order then exponents") {
    auto c = ClassContext::make({"s"});
    TruncatedSeries f = TruncatedSeries::one(c, 3);
    ClassVec q1(1), q2(1);
    q1.e[0] = 1;
    q2.e[0] = 2;
    f.add_term(Rat(3), {0, 1}, q1);
    f.add_term(Rat(1, 2), {-1, 2}, q2);
    f.add_term(Rat(-1), {1, 0}, q1);
    CHECK(f.str() == "1 + 3*y*s + -1*x*s + 1/2*x^-1*y^2*s^2");
}

TEST_CASE("collapse_labels specialises a label to 1") {
    auto c = ClassContext::make({"s", "e"});
    TruncatedSeries f = TruncatedSeries::one(c, 3);
    ClassVec qs(2), qe(2);
    qs.e[0] = 1;
    qe.e[1] = 1;
    f.add_term(Rat(1), {1, 0}, qs);
    f.add_term(Rat(2), {1, 0}, qe);
    auto g = f.collapse_labels({"e"});
    CHECK(g.context()->size() == 1);
    ClassVec q0(1), q1(1);
    q1.e[0] = 1;
    CHECK(g.coeff({1, 0}, q0) == Rat(2));  // the e-term now has trivial class part
    CHECK(g.coeff({1, 0}, q1) == Rat(1));
}
