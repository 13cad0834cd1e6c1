import random

import pytest

from freelike.words import (
    Word,
    canonical_form,
    commute_in_free,
    concat,
    cyclic_reduce,
    cyclic_shifts,
    enumerate_words,
    exp_sum,
    format_word,
    invert,
    is_canonical,
    parse_word,
    primitive_root,
    reduce,
    substitute,
)

A, B = 1, 2  # signed letters for a, b


def naive_reduce(letters):
    """Oracle: repeated full rescans until no adjacent pair cancels."""
    seq = list(letters)
    changed = True
    while changed:
        changed = False
        for i in range(len(seq) - 1):
            if seq[i] == -seq[i + 1]:
                del seq[i : i + 2]
                changed = True
                break
    return tuple(seq)


def random_letters(rng, rank, length):
    return [rng.choice([1, -1]) * rng.randint(1, rank) for _ in range(length)]


class TestReduce:
    def test_cancellation(self):
        assert reduce([A, -A], 2).letters == ()

    def test_single_cancellation(self):
        assert reduce([A, B, -B, A], 2).letters == (A, A)

    def test_concat_cancels_across_junction(self):
        # a b a^-1 * a b^-1 -> a  (frozen from the naive-rescan oracle)
        u = Word([A, B, -A], 2)
        v = Word([A, -B], 2)
        assert naive_reduce([A, B, -A, A, -B]) == (A,)
        assert concat(u, v).letters == (A,)

    def test_matches_naive_oracle(self):
        rng = random.Random(100)
        for _ in range(300):
            raw = random_letters(rng, 3, rng.randint(0, 24))
            assert Word(raw, 3).letters == naive_reduce(raw)

    def test_idempotent_and_length_nonincreasing(self):
        rng = random.Random(101)
        for _ in range(200):
            raw = random_letters(rng, 2, rng.randint(0, 20))
            w = Word(raw, 2)
            assert Word(w.letters, 2) == w
            assert len(w) <= len(raw)

    def test_word_times_inverse_is_empty(self):
        rng = random.Random(102)
        for _ in range(100):
            w = Word(random_letters(rng, 3, rng.randint(0, 15)), 3)
            assert not concat(w, invert(w))

    def test_rank_validation(self):
        with pytest.raises(ValueError):
            Word([3], 2)
        with pytest.raises(ValueError):
            Word([0], 2)


class TestConcatInvert:
    def test_concat_trivial(self):
        assert not concat(Word([A], 2), Word([-A], 2))

    def test_invert_ab(self):
        assert invert(parse_word("ab")).letters == (-B, -A)

    def test_invert_involution(self):
        rng = random.Random(103)
        for _ in range(100):
            w = Word(random_letters(rng, 2, rng.randint(0, 12)), 2)
            assert invert(invert(w)) == w

    def test_concat_rank_mismatch(self):
        with pytest.raises(ValueError):
            concat(Word([A], 2), Word([A], 3))


class TestSubstitute:
    def test_spread_pattern(self):
        u = parse_word("x1x2", rank=2)
        images = (parse_word("a", rank=2), parse_word("ba^6"))
        assert str(substitute(u, images)) == "aba^6"

    def test_vanishing(self):
        u = Word([A, -A], 2)  # reduces to empty before substitution
        assert not substitute(u, (parse_word("ab"), parse_word("b")))

    def test_equal_images_cancel(self):
        u = parse_word("x2X1", rank=2)
        assert not substitute(u, (parse_word("a"), parse_word("a")))

    def test_homomorphism_property(self):
        rng = random.Random(104)
        images = (parse_word("ab"), parse_word("ba^-2"), parse_word("b"))
        for _ in range(100):
            u = Word(random_letters(rng, 3, rng.randint(0, 8)), 3)
            v = Word(random_letters(rng, 3, rng.randint(0, 8)), 3)
            assert substitute(concat(u, v), images) == concat(
                substitute(u, images), substitute(v, images)
            )

    def test_rank_mismatch(self):
        with pytest.raises(ValueError):
            substitute(parse_word("x1x2x3", rank=3), (parse_word("a"), parse_word("b")))


class TestCyclic:
    def test_already_cyclically_reduced(self):
        conj, core = cyclic_reduce(parse_word("ab"))
        assert (str(conj), str(core)) == ("1", "ab")

    def test_single_peel(self):
        conj, core = cyclic_reduce(parse_word("abA"))
        assert (str(conj), str(core)) == ("a", "b")

    def test_double_peel(self):
        conj, core = cyclic_reduce(parse_word("a^2bA^2"))
        assert (str(conj), str(core)) == ("a^2", "b")

    def test_round_trip(self):
        rng = random.Random(105)
        for _ in range(200):
            w = Word(random_letters(rng, 2, rng.randint(0, 16)), 2)
            conj, core = cyclic_reduce(w)
            assert core.is_cyclically_reduced()
            assert concat(concat(conj, core), invert(conj)) == w

    def test_shifts_a2b(self):
        shifts = {str(w) for w in cyclic_shifts(parse_word("a^2b"))}
        assert shifts == {"a^2b", "aba", "ba^2"}

    def test_shifts_period_two(self):
        # (ab)^2: rotation period 2 halves the count
        shifts = {str(w) for w in cyclic_shifts(parse_word("abab"))}
        assert shifts == {"abab", "baba"}

    def test_shifts_single_letter(self):
        assert [str(w) for w in cyclic_shifts(parse_word("a"))] == ["a"]

    def test_shift_count_divides_length(self):
        rng = random.Random(106)
        for _ in range(100):
            w = Word(random_letters(rng, 2, rng.randint(1, 10)), 2)
            if not w or not w.is_cyclically_reduced():
                continue
            assert len(w) % len(cyclic_shifts(w)) == 0

    def test_shifts_require_cyclically_reduced(self):
        with pytest.raises(ValueError):
            cyclic_shifts(parse_word("abA"))


class TestExpSum:
    def test_conjugate_cancels(self):
        assert exp_sum(parse_word("abA"), 0) == 0

    def test_positive_count(self):
        assert exp_sum(parse_word("ab^2ab^4"), 1) == 6

    def test_mixed(self):
        assert exp_sum(parse_word("a^3B^1A"), 0) == 2

    def test_bad_index(self):
        with pytest.raises(ValueError):
            exp_sum(parse_word("ab"), 2)


class TestPrimitiveRoot:
    def test_power_of_letter(self):
        root, e = primitive_root(parse_word("a^6"))
        assert (str(root), e) == ("a", 6)

    def test_visible_period(self):
        root, e = primitive_root(parse_word("abab"))
        assert (str(root), e) == ("ab", 2)

    def test_conjugated_power(self):
        root, e = primitive_root(parse_word("ba^2B"))
        assert (str(root), e) == ("baB", 2)

    def test_brute_force_maximality(self):
        # Oracle: any w = z^e has a cyclically reduced core that is its core
        # root repeated, so the maximal exponent is the largest e' whose
        # length-(n/e') core prefix, repeated e' times, rebuilds the core.
        rng = random.Random(107)
        checked = 0
        for _ in range(400):
            w = Word(random_letters(rng, 2, rng.randint(1, 12)), 2)
            if not w:
                continue
            root, e = primitive_root(w)
            assert root**e == w
            _, core = cyclic_reduce(w)
            n = len(core)
            brute_max = max(
                ep
                for ep in range(1, n + 1)
                if n % ep == 0
                and Word(core.letters[: n // ep], 2) ** ep == core
            )
            assert e == brute_max
            checked += 1
        assert checked > 300

    def test_empty_word_rejected(self):
        with pytest.raises(ValueError):
            primitive_root(Word((), 2))


class TestCommute:
    def test_powers_commute(self):
        assert commute_in_free(parse_word("a"), parse_word("a^3"))

    def test_free_generators_do_not(self):
        assert not commute_in_free(parse_word("a", rank=2), parse_word("b"))

    def test_common_root(self):
        assert commute_in_free(parse_word("abab"), parse_word("ab"))

    def test_agrees_with_root_criterion(self):
        rng = random.Random(108)
        for _ in range(200):
            u = Word(random_letters(rng, 2, rng.randint(1, 10)), 2)
            w = Word(random_letters(rng, 2, rng.randint(1, 10)), 2)
            if not u or not w:
                continue
            by_product = commute_in_free(u, w)
            ru, _ = primitive_root(u)
            rw, _ = primitive_root(w)
            by_roots = ru == rw or ru == invert(rw)
            assert by_product == by_roots


class TestEnumerate:
    def test_length_one(self):
        assert len(list(enumerate_words(2, 1, "all"))) == 4

    def test_count_formula(self):
        # closed form: sum over i of 2k(2k-1)^(i-1)
        for k in (2, 3):
            for L in (1, 2, 3, 4):
                expected = sum(2 * k * (2 * k - 1) ** (i - 1) for i in range(1, L + 1))
                assert len(list(enumerate_words(k, L, "all"))) == expected

    def test_no_duplicates_and_all_reduced(self):
        seen = set(enumerate_words(2, 4, "all"))
        assert len(seen) == 2 * (3**4 - 1)

    def test_ascending_shortlex_order(self):
        words = list(enumerate_words(2, 3, "all"))
        keys = [(len(w), w.data) for w in words]
        assert keys == sorted(keys)

    def test_canonical_count_L2(self):
        assert len(list(enumerate_words(2, 2, "canonical"))) == 6

    def test_canonical_matches_brute_force_orbits(self):
        # Oracle: partition cyclically reduced words into orbits explicitly.
        for k, L in ((2, 4), (3, 3)):
            cyc = [
                w
                for w in enumerate_words(k, L, "all")
                if w.is_cyclically_reduced()
            ]
            orbits = set()
            for w in cyc:
                orbit = frozenset(
                    x.data
                    for v in (w, invert(w))
                    for x in cyclic_shifts(v)
                )
                orbits.add(orbit)
            canon = list(enumerate_words(k, L, "canonical"))
            assert len(canon) == len(orbits)
            assert all(is_canonical(w) for w in canon)

    def test_canonical_form_is_orbit_invariant(self):
        rng = random.Random(109)
        for _ in range(100):
            w = Word(random_letters(rng, 2, rng.randint(1, 8)), 2)
            if not w or not w.is_cyclically_reduced():
                continue
            c = canonical_form(w)
            for v in cyclic_shifts(w) + cyclic_shifts(invert(w)):
                assert canonical_form(v) == c


class TestTextFormat:
    @pytest.mark.parametrize(
        "text,letters",
        [
            ("a", (1,)),
            ("A", (-1,)),
            ("ab^4", (1, 2, 2, 2, 2)),
            ("a^-3", (-1, -1, -1)),
            ("Ba", (-2, 1)),
            ("x1X2", (1, -2)),
            ("1", ()),
        ],
    )
    def test_parse(self, text, letters):
        assert parse_word(text, rank=2).letters == letters

    def test_round_trip_random(self):
        rng = random.Random(110)
        for _ in range(300):
            w = Word(random_letters(rng, 3, rng.randint(0, 14)), 3)
            assert parse_word(format_word(w), rank=3) == w

    def test_round_trip_high_rank_variables(self):
        w = Word([27, 27, -27, 5], 30)
        assert parse_word(format_word(w), rank=30) == w

    def test_rejects_garbage(self):
        with pytest.raises(ValueError):
            parse_word("a$b")
        with pytest.raises(ValueError):
            parse_word("a2")

    def test_rank_inference(self):
        assert parse_word("c").rank == 3


class TestWordValue:
    def test_equality_and_hash(self):
        assert parse_word("ab") == parse_word("ab")
        assert hash(parse_word("ab")) == hash(parse_word("ab"))
        assert parse_word("ab") != parse_word("ba")

    def test_immutability(self):
        w = parse_word("ab")
        with pytest.raises(AttributeError):
            w.rank = 3

    def test_pow(self):
        assert str(parse_word("ab") ** 3) == "ababab"
        assert str(parse_word("ab") ** -2) == "BABA"
        assert not parse_word("ab") ** 0
