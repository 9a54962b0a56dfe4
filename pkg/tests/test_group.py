import pytest

from credentials import group


def test_generator_on_curve_and_order() -> None:
    assert group.is_on_curve(group.GENERATOR)
    assert group.base_mul(group.ORDER) is None
    assert group.base_mul(group.ORDER + 1) == group.GENERATOR


def test_scalar_multiplication_is_linear() -> None:
    a, b = group.random_scalar(), group.random_scalar()
    lhs = group.base_mul((a + b) % group.ORDER)
    assert lhs == group.point_add(group.base_mul(a), group.base_mul(b))
    assert group.point_mul(group.base_mul(a), b) == group.base_mul(a * b % group.ORDER)


def test_multi_mul_matches_separate_products() -> None:
    z = group.hash_to_point(b"tag", b"data")
    a, b = group.random_scalar(), group.random_scalar()
    expected = group.point_add(group.base_mul(a), group.point_mul(z, b))
    assert group.multi_mul((group.GENERATOR, a), (z, b)) == expected


def test_point_encoding() -> None:
    P = group.base_mul(group.random_scalar())
    data = group.point_to_bytes(P)
    assert len(data) == group.POINT_SIZE
    assert group.point_from_bytes(data) == P


@pytest.mark.parametrize("data", [b"", b"\x04" + b"\x01" * 32, b"\x02" + b"\xff" * 32, b"\x02" + bytes(32)])
def test_point_decoding_rejects(data) -> None:
    with pytest.raises(ValueError):
        group.point_from_bytes(data)


def test_hash_to_point_is_deterministic_and_on_curve() -> None:
    P = group.hash_to_point(b"tag", b"2024-01-01")
    assert group.is_on_curve(P)
    assert P == group.hash_to_point(b"tag", b"2024-01-01")
    assert P != group.hash_to_point(b"tag", b"2024-01-02")


def test_hash_to_scalar_separates_parts() -> None:
    assert group.hash_to_scalar(b"ab", b"c") != group.hash_to_scalar(b"a", b"bc")
    assert 0 <= group.hash_to_scalar(b"x") < group.ORDER


def test_compressed_encoding_matches_known_points() -> None:
    assert group.point_to_bytes(group.GENERATOR).hex() == (
        "0279be667ef9dcbbac55a06295ce870b07029bfcdb2dce28d959f2815b16f81798"
    )
    assert group.point_to_bytes(group.base_mul(2)).hex() == (
        "02c6047f9441ed7d6d3045406e95c07cd85c778e4b8cef3ca7abac09b95c709ee5"
    )


def test_multi_mul_cancellation_and_three_terms() -> None:
    a = group.random_scalar()
    assert group.multi_mul((group.GENERATOR, a), (group.GENERATOR, -a)) is None
    z = group.hash_to_point(b"tag", b"data")
    expected = group.point_add(group.base_mul(3), group.point_mul(z, 5))
    assert group.multi_mul((group.GENERATOR, 1), (z, 5), (group.GENERATOR, 2)) == expected


def test_point_at_infinity_is_none() -> None:
    assert group.point_add(None, group.GENERATOR) == group.GENERATOR
    assert group.point_mul(group.GENERATOR, 0) is None
    with pytest.raises(ValueError):
        group.point_to_bytes(None)
