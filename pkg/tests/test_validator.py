# tests/test_validator.py
import numpy as np
import pytest

from src.core.validator import SpaceValidator


@pytest.fixture
def validator():
    """
    Fixture providing a SpaceValidator instance for testing.

    Returns:
        SpaceValidator: Validator with the configured tolerance
    """
    return SpaceValidator()


@pytest.fixture
def valid_matrix():
    """
    Fixture providing the metric of three points on a line.

    Returns:
        numpy.ndarray: Symmetric distance matrix
    """
    return np.array([[0.0, 1.0, 2.0], [1.0, 0.0, 1.0], [2.0, 1.0, 0.0]])


def test_validator_initialization():
    """Test validator starts without an error and with the configured tolerance"""
    validator = SpaceValidator()
    assert validator.tolerance == 1e-9
    assert validator.last_error is None
    assert SpaceValidator(tolerance=0.5).tolerance == 0.5


def test_validate_matrix_success(validator, valid_matrix):
    """Test validation passes on a metric"""
    assert validator.validate_matrix(valid_matrix) is True
    assert validator.last_error is None


def test_validate_matrix_allows_infinity(validator):
    """Test infinitely far pairs are allowed"""
    dist = np.array([[0.0, np.inf], [np.inf, 0.0]])
    assert validator.validate_matrix(dist) is True


def test_validate_matrix_asymmetric(validator, valid_matrix):
    """Test validation fails on an asymmetric matrix"""
    valid_matrix[0, 1] = 3.0
    assert validator.validate_matrix(valid_matrix) is False
    assert 'Asymmetric' in validator.last_error


def test_validate_matrix_triangle(validator):
    """Test validation fails when the triangle inequality breaks"""
    dist = np.array([[0.0, 1.0, 5.0], [1.0, 0.0, 1.0], [5.0, 1.0, 0.0]])
    assert validator.validate_matrix(dist) is False
    assert 'Triangle' in validator.last_error


def test_validate_matrix_negative_and_diagonal(validator, valid_matrix):
    """Test negative entries and a non-zero diagonal are rejected"""
    negative = valid_matrix.copy()
    negative[0, 1] = negative[1, 0] = -1.0
    assert validator.validate_matrix(negative) is False
    diagonal = valid_matrix.copy()
    diagonal[2, 2] = 1.0
    assert validator.validate_matrix(diagonal) is False


def test_validate_matrix_shape_and_nan(validator):
    """Test non-square matrices and NaN entries are rejected"""
    assert validator.validate_matrix(np.zeros((2, 3))) is False
    assert validator.validate_matrix(np.array([[0.0, np.nan], [np.nan, 0.0]])) is False


def test_validate_map_values(validator):
    """Test total maps pass and out-of-range values fail"""
    assert validator.validate_map_values(np.array([0, 1, 1]), 3, 2) is True
    assert validator.validate_map_values(np.array([0, 2]), 2, 2) is False
    assert validator.validate_map_values(np.array([0]), 2, 2) is False


def test_validate_basepoint(validator):
    """Test optional basepoints must index a point"""
    assert validator.validate_basepoint(None, 3) is True
    assert validator.validate_basepoint(2, 3) is True
    assert validator.validate_basepoint(3, 3) is False
