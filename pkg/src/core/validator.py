import logging

import numpy as np

from config.settings import VALIDATION_SETTINGS

logger = logging.getLogger(__name__)


class SpaceValidator:
    """
    Validates distance matrices and point maps before they enter the toolkit.

    Each ``validate_*`` method logs the first failed check as a warning,
    stores it in ``last_error`` and returns False, so that callers can
    decide whether to reject the input or carry on.

    Attributes:
        tolerance (float): Slack allowed on the triangle inequality and symmetry.
        last_error (str): Message of the most recent failed check, or None.
    """

    def __init__(self, tolerance=None):
        """
        Initialize the validator.

        Args:
            tolerance (float, optional): Metric tolerance. Defaults to
                VALIDATION_SETTINGS['metric_tolerance'].
        """
        self.tolerance = VALIDATION_SETTINGS['metric_tolerance'] if tolerance is None else tolerance
        self.last_error = None

    def _fail(self, message):
        self.last_error = message
        logger.warning(message)
        return False

    def validate_matrix(self, dist):
        """
        Check that a square matrix is an extended pseudo-metric.

        Args:
            dist (numpy.ndarray): Candidate distance matrix, ``inf`` allowed.

        Returns:
            bool: True if the matrix passes every axiom check.
        """
        self.last_error = None
        if dist.ndim != 2 or dist.shape[0] != dist.shape[1]:
            return self._fail(f"Distance matrix must be square, got shape {dist.shape}")
        if np.isnan(dist).any():
            return self._fail("Distance matrix contains NaN")
        if (dist < 0).any():
            i, j = np.argwhere(dist < 0)[0]
            return self._fail(f"Negative distance d({i},{j}) = {dist[i, j]}")
        if dist.shape[0] == 0:
            return True
        if not np.all(np.diag(dist) == 0):
            i = int(np.flatnonzero(np.diag(dist) != 0)[0])
            return self._fail(f"d({i},{i}) = {dist[i, i]} is not zero")
        if not self._is_symmetric(dist):
            return False
        return self._satisfies_triangle(dist)

    def _is_symmetric(self, dist):
        both_inf = np.isinf(dist) & np.isinf(dist.T)
        with np.errstate(invalid='ignore'):
            gap = np.where(both_inf, 0.0, np.abs(dist - dist.T))
        if (gap > self.tolerance).any():
            i, j = np.argwhere(gap > self.tolerance)[0]
            return self._fail(f"Asymmetric distance: d({i},{j}) = {dist[i, j]} but d({j},{i}) = {dist[j, i]}")
        return True

    def _satisfies_triangle(self, dist):
        # one pivot at a time keeps memory at n^2
        for k in range(dist.shape[0]):
            through_k = dist[:, k, None] + dist[None, k, :]
            bad = dist > through_k + self.tolerance
            if bad.any():
                i, j = np.argwhere(bad)[0]
                return self._fail(
                    f"Triangle inequality fails: d({i},{j}) = {dist[i, j]} > "
                    f"d({i},{k}) + d({k},{j}) = {through_k[i, j]}"
                )
        return True

    def validate_map_values(self, values, domain_size, codomain_size):
        """
        Check that a value vector describes a total map between index sets.

        Args:
            values (numpy.ndarray): Codomain index per domain index.
            domain_size (int): Number of domain points.
            codomain_size (int): Number of codomain points.

        Returns:
            bool: True if the map is total and lands in the codomain.
        """
        self.last_error = None
        if values.ndim != 1 or values.shape[0] != domain_size:
            return self._fail(f"Map must assign one value per domain point: expected {domain_size}, got {values.shape}")
        if domain_size and (values.min() < 0 or values.max() >= codomain_size):
            return self._fail(f"Map values must lie in [0, {codomain_size}), got range [{values.min()}, {values.max()}]")
        return True

    def validate_basepoint(self, basepoint, size):
        """Check that an optional basepoint index refers to a point."""
        self.last_error = None
        if basepoint is None:
            return True
        if not 0 <= basepoint < size:
            return self._fail(f"Basepoint {basepoint} outside [0, {size})")
        return True
