#include <catch2/catch.hpp>

#include "qse/arith.hpp"
#include "qse/statevector.hpp"

using namespace qse;

namespace {

// Loads basis values into registers, applies the fragment, and requires the
// result to be exactly one basis state, which it returns.
std::uint64_t run_basis(const CircuitFragment& frag, std::uint32_t total, std::uint64_t input)
{
    Statevector s(total);
    s.set_basis(input);
    s.apply(frag);
    std::int64_t hit = -1;
    for (std::uint64_t i = 0; i < s.dim(); ++i) {
        const double p = std::norm(s.amplitude(i));
        if (p > 0.5) {
            REQUIRE(hit == -1);
            hit = static_cast<std::int64_t>(i);
        } else {
            REQUIRE(p < 1e-18);
        }
    }
    REQUIRE(hit >= 0);
    return static_cast<std::uint64_t>(hit);
}

std::uint64_t put(std::uint64_t value, const RegRange& r) { return value << r.first; }

}  // namespace

TEST_CASE("adder: examples and exhaustive truth table")
{
    // layout: a[0,3) b[3,6) sum[6,10) carries[10,13)
    const RegRange a{0, 3}, b{3, 3}, sum{6, 4}, car{10, 3};
    CircuitFragment add = adder_fragment(a, b, sum, car);

    SECTION("1 + 3 = 4")
    {
        const std::uint64_t out = run_basis(add, 13, put(1, a) | put(3, b));
        CHECK(((out >> sum.first) & 0xF) == 4);
    }
    SECTION("0 + 0 = 0")
    {
        CHECK(run_basis(add, 13, 0) == 0);
    }
    SECTION("exhaustive n=3: all 64 pairs, inputs kept, carries cleared")
    {
        for (std::uint64_t x = 0; x < 8; ++x)
            for (std::uint64_t y = 0; y < 8; ++y) {
                const std::uint64_t out = run_basis(add, 13, put(x, a) | put(y, b));
                CHECK(out == (put(x, a) | put(y, b) | put(x + y, sum)));
            }
    }
}

TEST_CASE("adder: unequal operand widths behave like zero extension")
{
    const RegRange a{0, 3}, b{3, 2}, sum{5, 4}, car{9, 3};
    CircuitFragment add = adder_fragment(a, b, sum, car);
    for (std::uint64_t x = 0; x < 8; ++x)
        for (std::uint64_t y = 0; y < 4; ++y) {
            const std::uint64_t out = run_basis(add, 12, put(x, a) | put(y, b));
            CHECK(((out >> sum.first) & 0xF) == x + y);
        }
}

TEST_CASE("adder: register contract violations throw")
{
    CHECK_THROWS_AS(adder_fragment({0, 3}, {3, 3}, {6, 3}, {9, 3}), Error);   // sum too narrow
    CHECK_THROWS_AS(adder_fragment({0, 3}, {3, 3}, {6, 4}, {10, 2}), Error);  // carries short
    CHECK_THROWS_AS(adder_fragment({0, 3}, {2, 3}, {6, 4}, {10, 3}), Error);  // overlap
}

TEST_CASE("multiplier: examples and exhaustive truth table")
{
    const RegRange a{0, 2}, b{2, 2}, prod{4, 4}, car{8, 1};
    CircuitFragment mul = multiplier_fragment(a, b, prod, car);

    SECTION("3 * 2 = 6")
    {
        const std::uint64_t out = run_basis(mul, 9, put(3, a) | put(2, b));
        CHECK(((out >> prod.first) & 0xF) == 6);
    }
    SECTION("0 * k = 0")
    {
        for (std::uint64_t k = 0; k < 4; ++k) {
            const std::uint64_t out = run_basis(mul, 9, put(k, b));
            CHECK(((out >> prod.first) & 0xF) == 0);
        }
    }
    SECTION("exhaustive n=2: all 16 pairs, inputs kept, carry cleared")
    {
        for (std::uint64_t x = 0; x < 4; ++x)
            for (std::uint64_t y = 0; y < 4; ++y) {
                const std::uint64_t out = run_basis(mul, 9, put(x, a) | put(y, b));
                CHECK(out == (put(x, a) | put(y, b) | put(x * y, prod)));
            }
    }
    SECTION("unequal widths: 3 bits by 2 bits")
    {
        const RegRange aa{0, 3}, bb{3, 2}, pp{5, 5}, cc{10, 1};
        CircuitFragment m = multiplier_fragment(aa, bb, pp, cc);
        for (std::uint64_t x = 0; x < 8; ++x)
            for (std::uint64_t y = 0; y < 4; ++y) {
                const std::uint64_t out = run_basis(m, 11, put(x, aa) | put(y, bb));
                CHECK(((out >> pp.first) & 0x1F) == x * y);
            }
    }
}

TEST_CASE("comparator: examples and exhaustive three-way table")
{
    // layout: a[0,3) b[3,6) gt=6 lt=7 chain[8,11)
    const RegRange a{0, 3}, b{3, 3}, chain{8, 3};
    const QubitId gt = 6, lt = 7;
    CircuitFragment cmp = comparator_fragment(a, b, gt, lt, chain);

    using FlagPair = std::pair<std::uint64_t, std::uint64_t>;
    auto flags = [&](std::uint64_t out) {
        return FlagPair{(out >> gt) & 1, (out >> lt) & 1};
    };

    SECTION("5 > 4 gives (1,0)")
    {
        CHECK(flags(run_basis(cmp, 11, put(5, a) | put(4, b))) == FlagPair{1, 0});
    }
    SECTION("7 == 7 gives (0,0)")
    {
        CHECK(flags(run_basis(cmp, 11, put(7, a) | put(7, b))) == FlagPair{0, 0});
    }
    SECTION("exhaustive n=3: all 64 pairs")
    {
        for (std::uint64_t x = 0; x < 8; ++x)
            for (std::uint64_t y = 0; y < 8; ++y) {
                const std::uint64_t in = put(x, a) | put(y, b);
                const std::uint64_t out = run_basis(cmp, 11, in);
                const auto [g, l] = flags(out);
                CHECK(g == (x > y ? 1u : 0u));
                CHECK(l == (x < y ? 1u : 0u));
                // inputs unchanged, chain restored
                CHECK((out & 0x3F) == in);
                CHECK(((out >> chain.first) & 0x7) == 0);
            }
    }
    SECTION("unequal widths compare numerically")
    {
        const RegRange aa{0, 4}, bb{4, 2}, ch{8, 4};
        CircuitFragment c = comparator_fragment(aa, bb, 6, 7, ch);
        for (std::uint64_t x = 0; x < 16; ++x)
            for (std::uint64_t y = 0; y < 4; ++y) {
                const std::uint64_t out = run_basis(c, 12, put(x, aa) | put(y, bb));
                CHECK(((out >> 6) & 1) == (x > y ? 1u : 0u));
                CHECK(((out >> 7) & 1) == (x < y ? 1u : 0u));
            }
    }
    SECTION("contract violations")
    {
        CHECK_THROWS_AS(comparator_fragment(a, b, 6, 6, chain), Error);
        CHECK_THROWS_AS(comparator_fragment(a, b, 6, 7, RegRange{8, 2}), Error);
        CHECK_THROWS_AS(comparator_fragment(a, {2, 3}, 6, 7, chain), Error);
    }
}

TEST_CASE("copy fragment duplicates basis content")
{
    const RegRange src{0, 3}, dst{3, 3};
    CircuitFragment cp = copy_fragment(src, dst);
    for (std::uint64_t v = 0; v < 8; ++v)
        CHECK(run_basis(cp, 6, put(v, src)) == (put(v, src) | put(v, dst)));
    CHECK_THROWS_AS(copy_fragment({0, 3}, {1, 3}), Error);
}

TEST_CASE("controlled arithmetic: double-controlled adder on superposed controls")
{
    // a=1 (q0), b=1 (q1), sum q2..3, carry q4, controls q5 q6
    const RegRange a{0, 1}, b{1, 1}, sum{2, 2}, car{4, 1};
    CircuitFragment add = adder_fragment(a, b, sum, car);
    CircuitFragment gated = controlled(add, {{5, true}, {6, true}});

    Statevector s(7);
    s.set_basis(0b0000011);  // a=1, b=1
    s.apply(Gate::h(5));
    s.apply(Gate::h(6));
    s.apply(gated);

    // exactly one of the four control configurations had the adder applied
    const double q = 0.25;
    CHECK(std::norm(s.amplitude(0b0000011)) == Approx(q));            // 00: untouched
    CHECK(std::norm(s.amplitude(0b0100011)) == Approx(q));            // 01
    CHECK(std::norm(s.amplitude(0b1000011)) == Approx(q));            // 10
    CHECK(std::norm(s.amplitude(0b1101011)) == Approx(q));            // 11: sum=2 written
    CHECK(s.norm_sq() == Approx(1.0));
}
