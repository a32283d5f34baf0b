from fractions import Fraction

import pytest

from probkin import (
    Capacity,
    CredalSet,
    Frame,
    DempsterModel,
    ProbabilityMeasure,
    SignedMassFunction,
    check_coherent,
    condition_lower,
    conditional_envelope,
    core_vertices_2monotone,
    envelope_revise,
    envelope_value,
    joint_marginal_envelope,
    kinematic_revise,
    project_dempster,
)
from probkin.credal import conditional_envelope_table, envelope_witness, positive_on_family_point
from probkin.errors import Infeasible, InvariantViolation, UndefinedOperation
from probkin.lab import gen_capacity, gen_probability

from conftest import frame_of


def pairs_capacity():
    f = frame_of(3)
    return Capacity.from_map(f, {m: Fraction(1, 2) for m in (0b011, 0b101, 0b110)})


def split_belief():
    f = frame_of(3)
    return Capacity.from_mass(
        SignedMassFunction(f, {0b001: Fraction(1, 2), 0b110: Fraction(1, 2)})
    )


class TestEnvelope:
    def test_full_frame_is_one(self, rng):
        for seed in range(10):
            c = gen_capacity(frame_of(2 + seed % 3), "two_monotone", seed)
            assert envelope_value(c, c.frame.full) == 1

    def test_pairs_value(self):
        c = pairs_capacity()
        assert envelope_value(c, 0b011) == Fraction(1, 2) == c[0b011]

    def test_additive_reproduces_itself(self, rng):
        for seed in range(8):
            f = frame_of(2 + seed % 3)
            p = gen_probability(f, seed)
            c = p.to_capacity()
            for a in f.subsets():
                assert envelope_value(c, a) == c[a]

    def test_witness_attains_the_value(self):
        c = pairs_capacity()
        value, witness = envelope_witness(c, 0b011)
        assert witness.of(0b011) == value
        assert CredalSet(c).contains(witness)

    def test_empty_credal_set_raises_with_certificate(self):
        f = frame_of(2)
        c = Capacity.from_map(f, {0b01: Fraction(3, 4), 0b10: Fraction(3, 4)})
        with pytest.raises(Infeasible) as err:
            envelope_value(c, 0b01)
        assert err.value.certificate is not None
        assert CredalSet(c).is_empty()

    def test_coherence(self):
        assert check_coherent(split_belief())
        assert check_coherent(pairs_capacity())
        witness = Capacity.from_map(
            frame_of(3),
            {0b001: Fraction(1, 2), 0b011: Fraction(1, 4), 0b101: Fraction(1, 2)},
        )
        assert not check_coherent(witness)

    def test_belief_functions_are_coherent(self):
        for seed in range(10):
            b = gen_capacity(frame_of(2 + seed % 3), "belief", seed)
            assert check_coherent(b)


class TestConditionalEnvelope:
    def test_split_belief_example(self):
        assert conditional_envelope(split_belief(), 0b001, 0b011) == Fraction(1, 2)

    def test_superset_and_disjoint(self, rng):
        for seed in range(8):
            f = frame_of(2 + seed % 3)
            c = gen_capacity(f, "two_monotone", seed)
            for e in f.subsets():
                if e == 0 or c[f.complement(e)] >= 1:
                    continue
                assert conditional_envelope(c, f.full, e) == 1
                assert conditional_envelope(c, f.complement(e), e) == 0

    def test_undefined_when_complement_certain(self):
        f = frame_of(2)
        certain_b = Capacity.from_map(f, {0b10: Fraction(1)})
        with pytest.raises(UndefinedOperation):
            conditional_envelope(certain_b, 0b01, 0b01)

    def test_closed_form_equality_randomized(self):
        # the 2-monotone closed form equals the exact LP envelope everywhere,
        # including events of lower probability zero
        zero_lower_seen = 0
        for seed in range(25):
            f = frame_of(2 + seed % 3)
            c = gen_capacity(f, "two_monotone", seed)
            for e in f.subsets():
                if e == 0 or c[f.complement(e)] >= 1:
                    continue
                if c[e] == 0:
                    zero_lower_seen += 1
                closed = condition_lower(c, e, "bayes")
                table = conditional_envelope_table(c, e)
                for a in f.subsets():
                    assert closed[a] == table[a]
        assert zero_lower_seen > 0

    def test_vertex_oracle_matches_envelope(self):
        for seed in range(12):
            f = frame_of(2 + seed % 3)
            c = gen_capacity(f, "two_monotone", seed)
            vertices = core_vertices_2monotone(c)
            for e in f.subsets():
                if e == 0 or c[f.complement(e)] >= 1:
                    continue
                for a in f.subsets():
                    conditionals = [
                        v.of(a & e) / v.of(e) for v in vertices if v.of(e) > 0
                    ]
                    assert conditionals, "some vertex must give E positive mass"
                    assert min(conditionals) == conditional_envelope(c, a, e)


class TestCoreVertices:
    def test_two_element_example(self):
        f = frame_of(2)
        c = Capacity.from_map(f, {0b01: Fraction(1, 4), 0b10: Fraction(1, 4)})
        vertices = core_vertices_2monotone(c)
        assert [v.weights for v in vertices] == [
            (Fraction(1, 4), Fraction(3, 4)),
            (Fraction(3, 4), Fraction(1, 4)),
        ]

    def test_additive_gives_single_point(self):
        f = frame_of(3)
        p = ProbabilityMeasure(f, (Fraction(1, 2), Fraction(1, 3), Fraction(1, 6)))
        vertices = core_vertices_2monotone(p.to_capacity())
        assert len(vertices) == 1 and vertices[0].weights == p.weights

    def test_vacuous_gives_unit_masses(self):
        vertices = core_vertices_2monotone(Capacity.vacuous(frame_of(2)))
        assert [v.weights for v in vertices] == [
            (Fraction(0), Fraction(1)),
            (Fraction(1), Fraction(0)),
        ]

    def test_rejects_non_2_monotone(self):
        c = Capacity.from_map(frame_of(3), {0b011: Fraction(3, 4), 0b101: Fraction(3, 4)})
        with pytest.raises(InvariantViolation):
            core_vertices_2monotone(c)

    def test_vertices_dominate(self):
        for seed in range(10):
            c = gen_capacity(frame_of(2 + seed % 3), "two_monotone", seed)
            credal = CredalSet(c)
            for v in core_vertices_2monotone(c):
                assert credal.contains(v)


class TestJointMarginalEnvelope:
    def example_model(self):
        fx = frame_of(2)
        fy = Frame(("y1", "y2"))
        return DempsterModel(
            fx, fy,
            {"y1": Fraction(1, 2), "y2": Fraction(1, 2)},
            {"y1": 0b01, "y2": 0b11},
        )

    def test_example_values(self):
        model = self.example_model()
        assert joint_marginal_envelope(model, 0b01) == Fraction(1, 2)
        assert joint_marginal_envelope(model, 0b11) == 1
        assert joint_marginal_envelope(model, 0) == 0

    def test_matches_projected_belief(self, rng):
        for _ in range(20):
            fx = frame_of(rng.randint(1, 4))
            fy = Frame(tuple(f"y{i}" for i in range(rng.randint(1, 4))))
            ks = [rng.randint(1, 5) for _ in range(fy.n)]
            total = sum(ks)
            u = {y: Fraction(k, total) for y, k in zip(fy.labels, ks)}
            gamma = {y: rng.randint(1, fx.size - 1) for y in fy.labels}
            model = DempsterModel(fx, fy, u, gamma)
            _, b, _ = project_dempster(model)
            for a in fx.subsets():
                assert joint_marginal_envelope(model, a) == b[a]


class TestEnvelopeRevise:
    def test_additive_prior_collapses_to_revision(self):
        f = frame_of(3)
        p = ProbabilityMeasure(f, (Fraction(1, 4), Fraction(1, 4), Fraction(1, 2)))
        l2 = Capacity.from_mass(
            SignedMassFunction(f, {0b011: Fraction(1, 2), 0b111: Fraction(1, 2)})
        )
        report = envelope_revise(p.to_capacity(), l2)
        q = kinematic_revise(p, l2.mobius())
        for a in f.subsets():
            lower, best = report.bracket(a)
            assert lower == best == q.of(a)

    def test_point_mass_collapses_to_conditional_envelope(self):
        bel = split_belief()
        f = bel.frame
        point = Capacity.from_mass(SignedMassFunction(f, {0b011: Fraction(1)}))
        report = envelope_revise(bel, point)
        for a in f.subsets():
            lower, best = report.bracket(a)
            assert lower == best == conditional_envelope(bel, a, 0b011)

    def test_signed_evidence_bound_is_valid(self):
        # a 2-monotone, non-belief bound exercises the conjugate-envelope
        # branch of the lower bound; a 1/32 grid over the core checks that
        # the bracket really contains the feasible minimum
        f = frame_of(3)
        pairs = pairs_capacity()
        assert any(v < 0 for v in pairs.mobius().masses.values())
        bel = split_belief()
        report = envelope_revise(bel, pairs)
        m2 = pairs.mobius()
        denominator = 32
        grid_minimum = {a: None for a in f.subsets()}
        for i in range(denominator + 1):
            for j in range(denominator + 1 - i):
                w = (
                    Fraction(i, denominator),
                    Fraction(j, denominator),
                    Fraction(denominator - i - j, denominator),
                )
                q = ProbabilityMeasure(f, w)
                if any(q.of(b) < bel[b] for b in f.subsets()):
                    continue
                if any(q.of(e) == 0 for e in m2.focal_sets):
                    continue
                for a in f.subsets():
                    val = sum((m2[e] * q.cond(a, e) for e in m2.focal_sets), Fraction(0))
                    if grid_minimum[a] is None or val < grid_minimum[a]:
                        grid_minimum[a] = val
        for a in f.subsets():
            lower, best = report.bracket(a)
            assert lower <= grid_minimum[a] <= best

    def test_bracket_contains_dense_grid_minimum(self):
        bel = split_belief()
        f = bel.frame
        l2 = Capacity.from_mass(
            SignedMassFunction(f, {0b011: Fraction(1, 2), 0b111: Fraction(1, 2)})
        )
        report = envelope_revise(bel, l2)
        m2 = l2.mobius()
        denominator = 64
        grid_minimum = {a: None for a in f.subsets()}
        for i in range(denominator + 1):
            for j in range(denominator + 1 - i):
                w = (
                    Fraction(i, denominator),
                    Fraction(j, denominator),
                    Fraction(denominator - i - j, denominator),
                )
                point = ProbabilityMeasure(f, w)
                if any(point.of(b) < bel[b] for b in f.subsets()):
                    continue
                if any(point.of(e) == 0 for e in m2.focal_sets):
                    continue
                for a in f.subsets():
                    val = sum(
                        (m2[e] * point.cond(a, e) for e in m2.focal_sets), Fraction(0)
                    )
                    if grid_minimum[a] is None or val < grid_minimum[a]:
                        grid_minimum[a] = val
        for a in f.subsets():
            lower, best = report.bracket(a)
            assert lower <= grid_minimum[a] <= best

    def test_witnesses_are_feasible(self):
        bel = split_belief()
        l2 = Capacity.from_mass(
            SignedMassFunction(bel.frame, {0b011: Fraction(1, 2), 0b111: Fraction(1, 2)})
        )
        report = envelope_revise(bel, l2)
        credal = CredalSet(bel)
        for a in bel.frame.subsets():
            witness = ProbabilityMeasure(bel.frame, report.entries[a].witness)
            assert credal.contains(witness)

    def test_undefined_when_no_positive_point(self):
        f = frame_of(2)
        forced = ProbabilityMeasure(f, (Fraction(0), Fraction(1))).to_capacity()
        l2 = Capacity.from_mass(SignedMassFunction(f, {0b01: Fraction(1)}))
        with pytest.raises(UndefinedOperation):
            envelope_revise(forced, l2)

    def test_requires_two_monotone_operands(self):
        f = frame_of(3)
        bad = Capacity.from_map(f, {0b011: Fraction(3, 4), 0b101: Fraction(3, 4)})
        with pytest.raises(InvariantViolation):
            envelope_revise(bad, Capacity.vacuous(f))
        with pytest.raises(InvariantViolation):
            envelope_revise(Capacity.vacuous(f), bad)


def test_positive_on_family_point_slack():
    c = split_belief()
    point, slack = positive_on_family_point(c, [0b001, 0b110])
    assert slack > 0
    assert point[0] >= Fraction(1, 2)


def test_single_element_frame_degenerate_cases():
    f = frame_of(1)
    c = Capacity.vacuous(f)
    assert check_coherent(c)
    assert envelope_value(c, 1) == 1
    assert conditional_envelope(c, 1, 1) == 1
    vertices = core_vertices_2monotone(c)
    assert [v.weights for v in vertices] == [(Fraction(1),)]
    report = envelope_revise(c, c)
    assert report.bracket(1) == (Fraction(1), Fraction(1))
