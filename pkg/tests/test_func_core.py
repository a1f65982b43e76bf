"""Candidate parsing, critical point search and Laplacian surgery."""
import numpy as np
import pytest

from bubbletower.const import InputError
from bubbletower.func_core import (
    CandidateError,
    ExpressionError,
    SphereSpec,
    SurgeryError,
    check_admissibility,
    classify_point,
    find_critical_points,
    intrinsic_gradient,
    intrinsic_hessian,
    laplace_beltrami,
    load_candidate_file,
    make_patch,
    parse_candidate,
    search_critical_points,
    verify_surgery,
)
from bubbletower.func_core.sphere import geodesic_distance, product_grid, sphere_volume

from .conftest import (
    HEART_LAPLACIAN_PATCHED,
    HEART_LAPLACIAN_SADDLE,
    NORTH,
    SADDLE_LOWER,
    SADDLE_UPPER,
    SOUTH,
    SURGERY_COEFFICIENTS,
    SURGERY_DELTA,
    SURGERY_EPSILON,
    nearest_point,
    random_sphere_points,
)

S3 = SphereSpec(3)


@pytest.mark.parametrize(
    "text",
    ["2 + x5", "2 + * x1", "(2 + x1", "2 + x1^0.5", "2 $ x1", ""],
)
def test_parse_errors(text):
    with pytest.raises(ExpressionError):
        parse_candidate(text, S3)


def test_parse_error_column():
    with pytest.raises(ExpressionError) as info:
        parse_candidate("2 + x9", S3)

    assert info.value.column == 4


def test_not_positive():
    with pytest.raises(CandidateError):
        parse_candidate("x4", S3)

    # Allowed when validation is skipped
    candidate = parse_candidate("x4", S3, validate=False)
    assert candidate(NORTH) == pytest.approx(1.0)


def test_sphere_dimension():
    with pytest.raises(InputError):
        SphereSpec(1)

    assert SphereSpec(5).is_high_dim
    assert SphereSpec(3).is_single_bubble
    with pytest.raises(InputError):
        SphereSpec(4).require_high_dim(single_bubble_ok=True)


def test_load_candidate_file(tmp_path, data_dir):
    heart = load_candidate_file(data_dir / "candidates" / "heart.expr")
    assert heart.n == 3
    assert heart(NORTH) == pytest.approx(5.0)

    no_header = tmp_path / "no_header.expr"
    no_header.write_text("2 + x4\n", encoding="utf-8")
    with pytest.raises(ExpressionError):
        load_candidate_file(no_header)

    two_lines = tmp_path / "two_lines.expr"
    two_lines.write_text("dim=3\n2 + x4\n3 + x4\n", encoding="utf-8")
    with pytest.raises(ExpressionError):
        load_candidate_file(two_lines)


def test_rational_expression(rng):
    candidate = parse_candidate("(3 + x1) / (2 - x2) + x3^2", S3)
    points = random_sphere_points(rng, 3, 50)
    expected = (3 + points[:, 0]) / (2 - points[:, 1]) + points[:, 2] ** 2
    assert np.allclose(candidate.values(points), expected)


def test_product_grid_volume():
    for n in (2, 3, 5):
        _, weights = product_grid(n, 4)
        assert weights.sum() == pytest.approx(sphere_volume(n), rel=1e-12)


# -----------------------------------------------------------------------------


def test_gradient_is_tangent(s3_height, rng):
    points = random_sphere_points(rng, 3, 100)
    gradients = intrinsic_gradient(s3_height, points)
    assert np.allclose(np.einsum("ij,ij->i", gradients, points), 0.0, atol=1e-12)


def test_height_laplacian(s3_height, s5_height, rng):
    # Coordinate functions are eigenfunctions: Laplacian of x_(n+1) is -n x_(n+1)
    for candidate in (s3_height, s5_height):
        n = candidate.n
        points = random_sphere_points(rng, n, 100)
        laplacians = laplace_beltrami(candidate, points)
        assert np.allclose(laplacians, -n * points[:, -1], atol=1e-10)


def test_hessian_trace_is_laplacian(heart, rng):
    points = random_sphere_points(rng, 3, 50)
    hessians = intrinsic_hessian(heart, points)
    traces = np.trace(hessians, axis1=1, axis2=2)
    assert np.allclose(traces, laplace_beltrami(heart, points), atol=1e-10)


def test_height_critical_points(s2_height, s3_height):
    for candidate in (s2_height, s3_height):
        n = candidate.n
        points = find_critical_points(candidate, grid_resolution=6)
        assert len(points) == 2

        maximum, minimum = points
        assert maximum.value == pytest.approx(3.0)
        assert maximum.morse_index == n
        assert maximum.inverse_index == 0
        assert maximum.laplacian == pytest.approx(-n)
        assert minimum.value == pytest.approx(1.0)
        assert minimum.morse_index == 0
        assert minimum.laplacian == pytest.approx(n)


def test_heart_critical_points(heart, heart_points):
    assert len(heart_points) == 6
    assert [p.morse_index for p in heart_points] == [3, 2, 1, 1, 0, 0]
    assert [p.value for p in heart_points] == pytest.approx([5.0, 3.0, 2.75, 2.75, 1.4, 1.4])

    south = nearest_point(heart_points, SOUTH)
    assert float(geodesic_distance(south.location, SOUTH)) < 1e-8
    assert south.laplacian == pytest.approx(-4.0)

    for location in (SADDLE_UPPER, SADDLE_LOWER):
        saddle = nearest_point(heart_points, location)
        assert float(geodesic_distance(saddle.location, location)) < 1e-8
        assert saddle.laplacian == pytest.approx(HEART_LAPLACIAN_SADDLE)
        assert saddle.hessian_eigenvalues == pytest.approx([-3.0, 1.5, 2.0])


def test_heart_admissible(heart, heart_points):
    report = check_admissibility(heart, critical_points=heart_points)
    assert report.passed
    assert report.index_counts == {0: 2, 1: 2, 2: 1, 3: 1}
    assert report.euler_sum == report.euler_expected == 0
    assert report.morse_inequalities
    assert report.min_value >= 1.4 - 1e-9


def test_constant_is_not_morse():
    candidate = parse_candidate("2", S3)
    report = check_admissibility(candidate, grid_resolution=4)
    assert report.positive
    assert not report.morse
    assert not report.passed


def test_search_records_seeds(s3_height):
    result = search_critical_points(s3_height, grid_resolution=6)
    assert result.num_seeds == 12 * 6 * 6
    assert len(result.points) == 2


def test_classify_point(s5_height):
    north = np.zeros(6)
    north[-1] = 1.0
    point = classify_point(s5_height, north)
    assert point.is_maximum
    assert point.hessian_eigenvalues == pytest.approx([-1.0] * 5)


# -----------------------------------------------------------------------------


def test_surgery_laplacian(heart, patched_heart):
    assert patched_heart.is_patched
    assert not patched_heart.base.is_patched

    laplacian = laplace_beltrami(patched_heart, SADDLE_LOWER)
    assert laplacian == pytest.approx(HEART_LAPLACIAN_PATCHED, rel=1e-4)

    # Untouched at the other saddle and far away
    assert laplace_beltrami(patched_heart, SADDLE_UPPER) == pytest.approx(
        HEART_LAPLACIAN_SADDLE
    )
    assert patched_heart(NORTH) == pytest.approx(heart(NORTH), abs=1e-12)
    assert patched_heart(SADDLE_LOWER) == pytest.approx(heart(SADDLE_LOWER), abs=1e-12)


def test_surgery_report(heart, heart_points, patched_heart):
    patch = patched_heart.patches[0]
    report = verify_surgery(heart, patched_heart, patch, critical_points=heart_points)

    assert report.passed
    assert report.critical_set_preserved
    assert report.laplacian_error < 1e-4
    assert report.outside_deviation <= 1e-12
    assert report.sup_deviation > 0.0
    assert report.sup_constant == pytest.approx(
        report.sup_deviation / (SURGERY_EPSILON * SURGERY_DELTA**2)
    )
    assert np.isfinite(report.sup_constant)

    indexes = sorted(p.morse_index for p in report.critical_points)
    assert indexes == [0, 0, 1, 1, 2, 3]


def test_surgery_preconditions(heart, heart_points):
    saddle = nearest_point(heart_points, SADDLE_LOWER)
    maximum = nearest_point(heart_points, NORTH)

    # Extremal center
    with pytest.raises(SurgeryError):
        make_patch(
            heart,
            maximum,
            [-3.0, -1.5, -0.5],
            SURGERY_DELTA,
            SURGERY_EPSILON,
            critical_points=heart_points,
        )

    # Coefficients outside the epsilon band
    with pytest.raises(SurgeryError):
        make_patch(
            heart,
            saddle,
            [-1.5, 0.75, 0.5],
            SURGERY_DELTA,
            SURGERY_EPSILON,
            critical_points=heart_points,
        )

    # South pole lies within 2 delta
    with pytest.raises(SurgeryError):
        make_patch(
            heart,
            saddle,
            SURGERY_COEFFICIENTS,
            0.6,
            SURGERY_EPSILON,
            critical_points=heart_points,
        )

    # A band of width 1 or more could flip an eigenvalue sign
    with pytest.raises(SurgeryError, match="keeps the sign"):
        make_patch(
            heart,
            saddle,
            SURGERY_COEFFICIENTS,
            SURGERY_DELTA,
            1.5,
            critical_points=heart_points,
        )
