#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>
#include <vector>

#include "fln/policy.hpp"

using namespace fln;

namespace {

std::vector<SecrecyTag> secrecy_universe(int atoms) {
    std::vector<SecrecyTag> out{SecrecyTag::bottom(), SecrecyTag::top()};
    for (int i = 0; i < atoms; ++i) out.push_back(SecrecyTag::make("s" + std::to_string(i)));
    return out;
}

std::vector<IntegrityTag> integrity_universe(int atoms) {
    std::vector<IntegrityTag> out{IntegrityTag::bottom(), IntegrityTag::top()};
    for (int i = 0; i < atoms; ++i) out.push_back(IntegrityTag::make("i" + std::to_string(i)));
    return out;
}

std::vector<Label> label_universe(int atoms) {
    std::vector<Label> out;
    for (const auto& s : secrecy_universe(atoms))
        for (const auto& i : integrity_universe(atoms)) out.push_back({s, i});
    return out;
}

// All policies of length <= maxlen over the given atom count (Top/Bottom
// terminals only; Unlabeled is excluded from lattice enumeration by design).
std::vector<Policy> policy_universe(int atoms, int maxlen) {
    std::vector<Policy> out{Policy::bottom(), Policy::top()};
    std::vector<Policy> frontier = out;
    auto labels = label_universe(atoms);
    for (int len = 0; len < maxlen; ++len) {
        std::vector<Policy> next;
        for (const auto& p : frontier)
            for (const auto& l : labels) next.push_back(Policy::cons(l, p));
        out.insert(out.end(), next.begin(), next.end());
        frontier = std::move(next);
    }
    return out;
}

// Independent recursive oracle for the ordering, written directly off the
// declarative rules rather than sharing code with the implementation.
bool leq_oracle(const Policy& p, const Policy& q) {
    std::function<bool(size_t, size_t)> go = [&](size_t i, size_t j) -> bool {
        if (i >= p.labels.size() && p.term == Terminal::Bottom) return true;
        if (j >= q.labels.size() && q.term == Terminal::Top) return true;
        if (i >= p.labels.size() || j >= q.labels.size())
            return i >= p.labels.size() && j >= q.labels.size() && p.term == q.term;
        return label_leq(p.labels[i], q.labels[j]) && go(i + 1, j + 1);
    };
    return go(0, 0);
}

const Label alice_priv{SecrecyTag::make("AlicePriv"), IntegrityTag::bottom()};
const Label encoded_bal{SecrecyTag::bottom(), IntegrityTag::make("EncodedBal")};

}  // namespace

TEST_CASE("label ordering basics") {
    auto a = SecrecyTag::make("a");
    auto b = SecrecyTag::make("b");
    // Lattice bottom is below everything.
    for (const auto& l : label_universe(3)) CHECK(label_leq(Label::bottom(), l));
    // Atom below top, above bottom; distinct atoms incomparable.
    CHECK(label_leq({a, IntegrityTag::bottom()}, Label::top()));
    CHECK_FALSE(label_leq({a, IntegrityTag::bottom()}, {b, IntegrityTag::bottom()}));
    CHECK_FALSE(label_leq({b, IntegrityTag::bottom()}, {a, IntegrityTag::bottom()}));
    // Integrity runs inverted: Top is the least element.
    CHECK(integrity_leq(IntegrityTag::top(), IntegrityTag::make("x")));
    CHECK(integrity_leq(IntegrityTag::make("x"), IntegrityTag::bottom()));
    CHECK_FALSE(integrity_leq(IntegrityTag::bottom(), IntegrityTag::make("x")));
}

TEST_CASE("label_leq agrees with exhaustive componentwise oracle") {
    for (const auto& x : label_universe(3))
        for (const auto& y : label_universe(3)) {
            bool expect = secrecy_leq(x.secrecy, y.secrecy) && integrity_leq(x.integrity, y.integrity);
            CHECK(label_leq(x, y) == expect);
        }
}

TEST_CASE("policy_leq absorbing terminals") {
    auto univ = policy_universe(2, 2);
    for (const auto& p : univ) {
        CHECK(policy_leq(Policy::bottom(), p));
        CHECK(policy_leq(p, Policy::top()));
    }
    CHECK_THROWS_AS(policy_leq(Policy::unlabeled(), Policy::bottom()), LatticeError);
}

TEST_CASE("policy_leq matches recursive oracle on length <= 2 over 2 atoms") {
    auto univ = policy_universe(2, 2);
    for (const auto& p : univ)
        for (const auto& q : univ) CHECK(policy_leq(p, q) == leq_oracle(p, q));
}

TEST_CASE("policy_leq is a preorder on length <= 3 over 3 atoms") {
    // Keep the cubic transitivity pass tractable: length <= 3 chains over a
    // single-atom slice plus a full reflexivity sweep over the 3-atom universe.
    auto univ3 = policy_universe(3, 3);
    for (const auto& p : univ3) CHECK(policy_leq(p, p));
    auto univ = policy_universe(1, 2);
    for (const auto& p : univ)
        for (const auto& q : univ) {
            if (!policy_leq(p, q)) continue;
            for (const auto& r : univ)
                if (policy_leq(q, r)) CHECK(policy_leq(p, r));
        }
}

TEST_CASE("policy_join is an upper bound, commutative and idempotent") {
    auto univ = policy_universe(2, 2);
    for (const auto& p : univ)
        for (const auto& q : univ) {
            Policy j = policy_join(p, q);
            CHECK(j == policy_join(q, p));
            CHECK(policy_leq(p, j));
            CHECK(policy_leq(q, j));
        }
    for (const auto& p : univ) CHECK(policy_join(p, p) == p);
}

TEST_CASE("policy_join is least among upper bounds (brute-force search)") {
    // The cubic search runs on the 1-atom slice to stay fast; the upper-bound
    // and commutativity facts above cover the wider universe.
    auto univ = policy_universe(1, 2);
    for (const auto& p : univ)
        for (const auto& q : univ) {
            Policy j = policy_join(p, q);
            for (const auto& u : univ)
                if (policy_leq(p, u) && policy_leq(q, u)) CHECK(policy_leq(j, u));
        }
}

TEST_CASE("policy_join identities and atom clash") {
    Policy rho = Policy::single(alice_priv);
    CHECK(policy_join(rho, Policy::bottom()) == rho);
    CHECK(policy_join(rho, Policy::top()) == Policy::top());
    // Distinct secrecy atoms join to the secrecy top.
    Label a{SecrecyTag::make("a"), IntegrityTag::bottom()};
    Label b{SecrecyTag::make("b"), IntegrityTag::bottom()};
    Policy joined = policy_join(Policy::single(a), Policy::single(b));
    CHECK(joined == Policy::single({SecrecyTag::top(), IntegrityTag::bottom()}));
}

TEST_CASE("policy_join associativity on a small universe") {
    auto univ = policy_universe(1, 2);
    for (const auto& p : univ)
        for (const auto& q : univ)
            for (const auto& r : univ)
                CHECK(policy_join(policy_join(p, q), r) == policy_join(p, policy_join(q, r)));
}

TEST_CASE("rewrites_to: reflexive, capability step, and no free lunch") {
    Policy seq = Policy::cons(alice_priv, Policy::single(encoded_bal));
    CHECK(rewrites_to({}, seq, seq));

    RelabelCapability encode{alice_priv, encoded_bal, "encodeA"};
    CHECK(rewrites_to({encode}, seq, Policy::single(encoded_bal)));
    CHECK_FALSE(rewrites_to({}, Policy::single(alice_priv), Policy::bottom()));
}

TEST_CASE("rewrite closure from an empty capability set is trivial") {
    // BFS oracle: with no capabilities the only reachable core is the policy
    // itself, so rewrites_to collapses to policy_leq.
    auto univ = policy_universe(2, 2);
    for (const auto& p : univ) {
        auto closure = rewrite_closure({}, p);
        REQUIRE(closure.size() == 1);
        CHECK(closure.front() == p);
        for (const auto& q : univ) CHECK(rewrites_to({}, p, q) == policy_leq(p, q));
    }
}

TEST_CASE("in_high reproduces the alice/encode/yao judgments") {
    // Attacker at the lattice bottom label: observes only unrestricted data.
    Policy attacker = Policy::single(Label::bottom(), Terminal::Top);
    RelabelCapability encode{alice_priv, encoded_bal, "encodeA"};
    RelabelCapability yao{encoded_bal, Label::bottom(), "yao_execA"};

    CHECK(in_high(attacker, {}, Policy::single(alice_priv)));
    CHECK(in_high(attacker, {encode}, Policy::single(encoded_bal)));
    CHECK_FALSE(in_high(attacker, {encode, yao}, Policy::single(encoded_bal)));
}

TEST_CASE("in_high is antitone in the capability set") {
    Policy attacker = Policy::single(Label::bottom(), Terminal::Top);
    RelabelCapability encode{alice_priv, encoded_bal, "encodeA"};
    RelabelCapability yao{encoded_bal, Label::bottom(), "yao_execA"};
    std::vector<std::vector<RelabelCapability>> chains = {
        {}, {encode}, {encode, yao}};
    auto univ = policy_universe(2, 2);
    for (const auto& p : univ)
        for (size_t i = 0; i + 1 < chains.size(); ++i)
            if (!in_high(attacker, chains[i], p))
                CHECK_FALSE(in_high(attacker, chains[i + 1], p));
}

TEST_CASE("rewrites_to terminates with weakening-heavy capability sets") {
    // Capabilities whose targets feed each other; closure must still be finite.
    Label a{SecrecyTag::make("a"), IntegrityTag::bottom()};
    Label b{SecrecyTag::make("b"), IntegrityTag::bottom()};
    std::vector<RelabelCapability> caps = {{a, b, ""}, {b, a, ""}, {Label::top(), a, ""}};
    Policy p = Policy::cons(a, Policy::cons(b, Policy::cons(a, Policy::bottom())));
    auto closure = rewrite_closure(caps, p);
    CHECK(closure.size() >= 1);
    CHECK(rewrites_to(caps, p, Policy::single(a)));
}
