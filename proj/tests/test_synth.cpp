#include <catch2/catch.hpp>

#include <functional>
#include <map>
#include <set>

#include "qse/oracle.hpp"
#include "qse/parser.hpp"
#include "qse/synth.hpp"
#include "support/random_program.hpp"

using namespace qse;

namespace {

const char* kGuardTreeSrc =
    "var x:3; var y:2; if (x+y<4) { if (x>y) {A} else {B} } else { if (y>1) {C} else {D} }";

std::uint64_t bits_of(std::uint64_t basis, const RegRange& r)
{
    return (basis >> r.first) & ((std::uint64_t(1) << r.width) - 1);
}

struct FinalState {
    Statevector state;
    VariableLayout layout;
};

FinalState simulate(const std::string& src)
{
    BranchTree tree = parse_program(src);
    VariableLayout L = plan_layout(tree);
    QseCircuit qc = compile_qse(tree, L);
    Statevector s(std::max(L.total_qubits, 1u));
    s.apply(qc.prep);
    s.apply(qc.body);
    return {std::move(s), std::move(L)};
}

}  // namespace

TEST_CASE("plan_layout on the guard tree")
{
    BranchTree tree = parse_program(kGuardTreeSrc);
    VariableLayout L = plan_layout(tree);

    CHECK(L.var_range("x").first == 0);
    CHECK(L.var_range("x").width == 3);
    CHECK(L.var_range("y").first == 3);
    CHECK(L.var_range("y").width == 2);
    CHECK(L.s_width == 5);

    // one flag pair for the root comparison, one shared by the two nested
    // comparisons (their branch sites diverge at the root)
    CHECK(L.flag_width == 4);
    const FlagWriter& root = L.writer("x+y<4");
    CHECK(root.flags == std::vector<QubitId>{L.flag_base, L.flag_base + 1});
    CHECK(L.writer("x>y").flags == L.writer("y>1").flags);
    CHECK(L.writer("x>y").flags[0] == L.flag_base + 2);

    // the additive guard drives the pool: sum register is 4 qubits wide
    bool saw_sum = false;
    for (const auto& nr : root.scratch_breakdown)
        if (nr.name == std::string("sum")) {
            saw_sum = true;
            CHECK(nr.range.width == 4);
        }
    CHECK(saw_sum);
    CHECK(L.total_qubits == L.s_width + L.scratch.width + L.flag_width);
}

TEST_CASE("plan_layout corners")
{
    // single leaf: no conditions, no flags, no scratch
    VariableLayout L = plan_layout(parse_program("var a:2; {only}"));
    CHECK(L.flag_width == 0);
    CHECK(L.scratch.width == 0);
    CHECK(L.total_qubits == 2);

    // product register width follows the multiplier contract
    VariableLayout Lm = plan_layout(parse_program("var a:2; var b:2; if (a*b==6) {X} else {Y}"));
    bool saw_prod = false;
    for (const auto& nr : Lm.writer("a*b==6").scratch_breakdown)
        if (nr.name == std::string("prod")) {
            saw_prod = true;
            CHECK(nr.range.width == 4);
        }
    CHECK(saw_prod);

    // ceiling overflow reports a breakdown
    try {
        plan_layout(parse_program(kGuardTreeSrc), 10);
        FAIL("expected a layout error");
    } catch (const Error& e) {
        const std::string msg = e.what();
        CHECK(msg.find("exceeding the ceiling") != std::string::npos);
        CHECK(msg.find("variables 5") != std::string::npos);
        CHECK(msg.find("sum=4") != std::string::npos);
    }
}

TEST_CASE("prepare_space yields the uniform input superposition")
{
    SECTION("five qubits")
    {
        BranchTree tree = parse_program(kGuardTreeSrc);
        VariableLayout L = plan_layout(tree);
        Statevector s(L.total_qubits);
        s.apply(prepare_space(L));
        const double amp = std::pow(0.5, 2.5);
        for (std::uint64_t v = 0; v < 32; ++v)
            CHECK(std::abs(s.amplitude(v) - std::complex<double>(amp, 0.0)) < 1e-12);
        // flags and scratch stay |0>
        double p = 0.0;
        for (std::uint64_t v = 0; v < 32; ++v) p += std::norm(s.amplitude(v));
        CHECK(p == Approx(1.0));
    }
    SECTION("one qubit")
    {
        VariableLayout L = plan_layout(parse_program("var a:1; {only}"));
        Statevector s(1);
        s.apply(prepare_space(L));
        CHECK(s.amplitude(0).real() == Approx(std::sqrt(0.5)));
        CHECK(s.amplitude(1).real() == Approx(std::sqrt(0.5)));
    }
    SECTION("sampled marginal of the input register is uniform")
    {
        VariableLayout L = plan_layout(parse_program("var a:3; {only}"));
        Statevector s(3);
        s.apply(prepare_space(L));
        auto counts = measure_counts(s, {2, 1, 0}, 8192, 21);
        REQUIRE(counts.size() == 8);
        for (const auto& [bits, c] : counts) {
            (void)bits;
            CHECK(std::llabs(static_cast<long long>(c) - 1024) < 6 * 30.3);  // 6 sigma
        }
    }
}

TEST_CASE("t_module control recipes match the flag table")
{
    const QubitId hi = 9, lo = 8;
    using Arms = std::vector<std::vector<Control>>;
    auto one = [](std::initializer_list<Control> cs) { return Arms{std::vector<Control>(cs)}; };

    CHECK(t_module(RelOp::Lt, hi, lo).arms == one({{hi, false}, {lo, true}}));
    CHECK(t_module(RelOp::Le, hi, lo).arms == one({{hi, false}}));
    CHECK(t_module(RelOp::Gt, hi, lo).arms == one({{hi, true}, {lo, false}}));
    CHECK(t_module(RelOp::Ge, hi, lo).arms == one({{lo, false}}));
    CHECK(t_module(RelOp::Eq, hi, lo).arms == one({{hi, false}, {lo, false}}));
    CHECK(t_module(RelOp::Ne, hi, lo).arms.size() == 2);

    // complements: single-qubit forms where the table allows them
    CHECK(t_module_complement(RelOp::Lt, hi, lo).arms == one({{lo, false}}));
    CHECK(t_module_complement(RelOp::Le, hi, lo).arms == one({{hi, true}}));
    CHECK(t_module_complement(RelOp::Gt, hi, lo).arms == one({{hi, false}}));
    CHECK(t_module_complement(RelOp::Ge, hi, lo).arms == one({{lo, true}}));
    CHECK(t_module_complement(RelOp::Eq, hi, lo).arms.size() == 2);
    CHECK(t_module_complement(RelOp::Ne, hi, lo).arms == one({{hi, false}, {lo, false}}));
}

TEST_CASE("the != recipe fires on 01 and 10 only")
{
    // flags on qubits 1 (hi) and 0 (lo); target on qubit 2
    for (std::uint64_t in = 0; in < 4; ++in) {
        Statevector s(3);
        s.set_basis(in);
        for (const auto& arm : t_module(RelOp::Ne, 1, 0).arms) s.apply(Gate::x(2, arm));
        const bool flipped = in == 0b01 || in == 0b10;
        CHECK(s.amplitude(in | (flipped ? 4u : 0u)).real() == Approx(1.0));
    }
}

TEST_CASE("relational fragment segments the prepared space")
{
    BranchTree tree = parse_program(kGuardTreeSrc);
    VariableLayout L = plan_layout(tree);
    const RegRange x = L.var_range("x"), y = L.var_range("y");
    const FlagWriter& root = L.writer("x+y<4");
    const RegRange root_pair{root.flag_lo(), 2};

    Statevector s(L.total_qubits);
    s.apply(prepare_space(L));
    s.apply(relational_fragment(tree.root->cond, L));

    SECTION("first comparison writes its pair by the sum")
    {
        for (std::uint64_t i = 0; i < s.dim(); ++i) {
            if (std::norm(s.amplitude(i)) < 1e-18) continue;
            const std::uint64_t xv = bits_of(i, x), yv = bits_of(i, y);
            const std::uint64_t pair = bits_of(i, root_pair);  // bit1 = hi, bit0 = lo
            if (xv + yv < 4)
                CHECK(pair == 0b01);  // lo carries "less": (hi,lo) = (0,1)
            else
                CHECK((pair & 0b01) == 0);  // not less: lo = 0, hi free
            CHECK(bits_of(i, L.scratch) == 0);
        }
    }

    SECTION("nested comparison controlled on the satisfied pair")
    {
        const FlagWriter& inner = L.writer("x>y");
        const RegRange inner_pair{inner.flag_lo(), 2};
        auto ctrl = condition_recipe(tree.root->cond, true, L);
        s.apply(relational_fragment(tree.root->then_branch->cond, L, ctrl));
        for (std::uint64_t i = 0; i < s.dim(); ++i) {
            if (std::norm(s.amplitude(i)) < 1e-18) continue;
            const std::uint64_t xv = bits_of(i, x), yv = bits_of(i, y);
            const std::uint64_t pair = bits_of(i, inner_pair);
            if (xv + yv < 4 && xv > yv)
                CHECK(pair == 0b10);  // hi carries "greater"
            else if (xv + yv >= 4)
                CHECK(pair == 0);  // outside the controlled subspace: untouched
        }
    }
}

TEST_CASE("a==a sets the equality pattern everywhere")
{
    FinalState fs = simulate("var a:2; if (a==a) {X} else {Y}");
    const FlagWriter& w = fs.layout.writer("a==a");
    for (std::uint64_t i = 0; i < fs.state.dim(); ++i) {
        if (std::norm(fs.state.amplitude(i)) < 1e-18) continue;
        CHECK(((i >> w.flag_lo()) & 1) == 0);
        CHECK(((i >> w.flag_hi()) & 1) == 0);
    }
}

TEST_CASE("logical AND flag equals the classical conjunction per basis term")
{
    FinalState fs = simulate("var a:2; var b:2; if (a<b && a!=0) {X} else {Y}");
    const RegRange a = fs.layout.var_range("a"), b = fs.layout.var_range("b");
    const FlagWriter& andw = fs.layout.writer("a<b && a!=0");
    for (std::uint64_t i = 0; i < fs.state.dim(); ++i) {
        if (std::norm(fs.state.amplitude(i)) < 1e-18) continue;
        const bool expect = bits_of(i, a) < bits_of(i, b) && bits_of(i, a) != 0;
        CHECK(((i >> andw.flags[0]) & 1) == (expect ? 1u : 0u));
    }
}

TEST_CASE("logical OR flag equals the classical disjunction per basis term")
{
    FinalState fs = simulate("var a:2; if (a>1 || a==0) {X} else {Y}");
    const RegRange a = fs.layout.var_range("a");
    const FlagWriter& orw = fs.layout.writer("a>1 || a==0");
    for (std::uint64_t i = 0; i < fs.state.dim(); ++i) {
        if (std::norm(fs.state.amplitude(i)) < 1e-18) continue;
        const bool expect = bits_of(i, a) > 1 || bits_of(i, a) == 0;
        // both operands satisfied would double-flip without the corrector
        CHECK(((i >> orw.flags[0]) & 1) == (expect ? 1u : 0u));
    }
}

TEST_CASE("composite operands reduce to single-flag controls")
{
    // (a<2 && b==1) || (a==3 && b==0): OR of two AND flags, Toffoli-style
    FinalState fs =
        simulate("var a:2; var b:1; if ((a<2 && b==1) || (a==3 && b==0)) {X} else {Y}");
    const RegRange a = fs.layout.var_range("a"), b = fs.layout.var_range("b");
    const FlagWriter& orw = fs.layout.writer("a<2 && b==1 || a==3 && b==0");
    for (std::uint64_t i = 0; i < fs.state.dim(); ++i) {
        if (std::norm(fs.state.amplitude(i)) < 1e-18) continue;
        const std::uint64_t av = bits_of(i, a), bv = bits_of(i, b);
        const bool expect = (av < 2 && bv == 1) || (av == 3 && bv == 0);
        CHECK(((i >> orw.flags[0]) & 1) == (expect ? 1u : 0u));
    }
}

TEST_CASE("!= operands expand into their arm cross product")
{
    // two != operands give 2x2 = 4 multi-controlled X applications
    const ControlRecipe lhs = t_module(RelOp::Ne, 1, 0);
    const ControlRecipe rhs = t_module(RelOp::Ne, 3, 2);
    CircuitFragment andf = logical_and_fragment(lhs, rhs, 4);
    CHECK(andf.gates.size() == 4);
    for (const Gate& g : andf.gates) CHECK(g.controls.size() == 4);

    // OR: 2 + 2 + 4 gates for the three groups
    CircuitFragment orf = logical_or_fragment(lhs, rhs, 4);
    CHECK(orf.gates.size() == 8);

    // behavior check over all 16 operand flag states
    for (std::uint64_t in = 0; in < 16; ++in) {
        Statevector s(5);
        s.set_basis(in);
        s.apply(andf);
        const bool l = ((in >> 1) & 1) != ((in >> 0) & 1);
        const bool r = ((in >> 3) & 1) != ((in >> 2) & 1);
        const std::uint64_t expect = in | ((l && r) ? 16u : 0u);
        CHECK(s.amplitude(expect).real() == Approx(1.0));

        Statevector t(5);
        t.set_basis(in);
        t.apply(orf);
        CHECK(t.amplitude(in | ((l || r) ? 16u : 0u)).real() == Approx(1.0));
    }
}

TEST_CASE("negation is free")
{
    SECTION("recipes swap and double negation cancels")
    {
        BranchTree t = parse_program("var a:2; var b:2; if (!(a<b)) {X} else {Y}");
        VariableLayout L = plan_layout(t);
        const CondPtr inner = t.root->cond->lhs;
        CHECK(condition_recipe(t.root->cond, true, L).arms ==
              condition_recipe(inner, false, L).arms);
        const CondPtr dbl = CondExpr::negation(t.root->cond);
        CHECK(condition_recipe(dbl, true, L).arms == condition_recipe(inner, true, L).arms);
    }

    SECTION("gate lists are identical, subsets swap")
    {
        BranchTree plain = parse_program("var x:2; var y:2; if (x>y) {P} else {Q}");
        BranchTree wrapped = parse_program("var x:2; var y:2; if (!(x>y)) {P} else {Q}");
        QseCircuit a = compile_qse(plain, plan_layout(plain));
        QseCircuit b = compile_qse(wrapped, plan_layout(wrapped));
        CHECK(a.body.gates == b.body.gates);

        Partition pa = run_and_extract(a);
        Partition pb = run_and_extract(b);
        CHECK(pa.find("P")->cases == pb.find("Q")->cases);
        CHECK(pa.find("Q")->cases == pb.find("P")->cases);
    }
}

TEST_CASE("compile_qse dictionary for the guard tree")
{
    BranchTree tree = parse_program(kGuardTreeSrc);
    QseCircuit qc = compile_qse(tree, plan_layout(tree));
    REQUIRE(qc.dictionary.branches.size() == 4);
    auto pattern = [&](const char* id) {
        for (const auto& b : qc.dictionary.branches)
            if (b.branch_id == id) {
                REQUIRE(b.arms.size() == 1);
                return b.arms[0].text;
            }
        FAIL("missing branch");
        return std::string();
    };
    CHECK(pattern("A") == "1001");
    CHECK(pattern("B") == "0*01");
    CHECK(pattern("C") == "10*0");
    CHECK(pattern("D") == "0**0");
    CHECK(qc.dictionary.patterns_disjoint());
}

TEST_CASE("compile_qse corners")
{
    SECTION("single leaf compiles to an empty body and the all-star pattern")
    {
        BranchTree t = parse_program("var a:2; {only}");
        QseCircuit qc = compile_qse(t, plan_layout(t));
        CHECK(qc.body.gates.empty());
        REQUIRE(qc.dictionary.branches.size() == 1);
        REQUIRE(qc.dictionary.branches[0].arms.size() == 1);
        CHECK(qc.dictionary.branches[0].arms[0].mask == 0);
    }

    SECTION("three-level tree: eight disjoint, exhaustive patterns over six flags")
    {
        int c = 0;
        std::function<NodePtr(int)> full = [&](int depth) -> NodePtr {
            if (depth == 3) return BranchNode::leaf("f" + std::to_string(c++));
            // distinct thresholds at each site keep all eight leaves non-empty
            static const char* vars[] = {"a", "b", "a"};
            return BranchNode::branch(
                CondExpr::rel(ArithExpr::variable(vars[depth]), RelOp::Lt,
                              ArithExpr::constant(depth == 0 ? 2 : (depth == 1 ? 2 : 3))),
                full(depth + 1), full(depth + 1));
        };
        BranchTree t{{{"a", 2}, {"b", 2}}, full(0)};
        VariableLayout L = plan_layout(t);
        CHECK(L.flag_width == 6);
        QseCircuit qc = compile_qse(t, L);
        REQUIRE(qc.dictionary.branches.size() == 8);
        CHECK(qc.dictionary.patterns_disjoint());

        // every reachable flag state matches exactly one branch
        Statevector s(L.total_qubits);
        s.apply(qc.prep);
        s.apply(qc.body);
        std::set<std::uint64_t> reachable;
        for (std::uint64_t i = 0; i < s.dim(); ++i)
            if (std::norm(s.amplitude(i)) > 1e-18)
                reachable.insert(bits_of(i, {L.flag_base, L.flag_width}));
        for (std::uint64_t f : reachable) CHECK(qc.dictionary.match(f) >= 0);
    }
}

TEST_CASE("flag classicality, uniformity and scratch hygiene on random programs")
{
    qse::testing::ProgramGen gen(314159);
    for (int trial = 0; trial < 12; ++trial) {
        BranchTree t = gen.next();
        VariableLayout L = plan_layout(t);
        QseCircuit qc = compile_qse(t, L);
        Statevector s(std::max(L.total_qubits, 1u));
        s.apply(qc.prep);
        s.apply(qc.body);

        const double uniform = std::pow(0.5, 0.5 * L.s_width);
        std::map<std::uint64_t, std::uint64_t> flag_of;  // input value -> flag state
        std::uint64_t terms = 0;
        for (std::uint64_t i = 0; i < s.dim(); ++i) {
            if (std::norm(s.amplitude(i)) < 1e-18) continue;
            ++terms;
            CHECK(std::abs(std::abs(s.amplitude(i)) - uniform) < 1e-9);
            CHECK(bits_of(i, L.scratch) == 0);
            const std::uint64_t sv = i & ((std::uint64_t(1) << L.s_width) - 1);
            const std::uint64_t fv = bits_of(i, {L.flag_base, L.flag_width});
            auto [it, fresh] = flag_of.emplace(sv, fv);
            CHECK((fresh || it->second == fv));  // one flag state per input
        }
        CHECK(terms == (std::uint64_t(1) << L.s_width));
        CHECK(qc.dictionary.patterns_disjoint());
    }
}
