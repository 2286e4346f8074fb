"""On-disk cache of expensive matrices and tensors.

Entries are ``.npz`` files named by the sha256 of their key, where the key
joins the input digest, the block tag (a measure tag or ``pmi-tensor``), the
estimator, the number of bins and the alphabet convention. The PMI tensor is
the dominant cost of measures 4 and 6, so caching it lets one reuse it for
the other.
"""

import hashlib
import os
import tempfile
import zipfile
from pathlib import Path

import numpy as np
import structlog
from numpy.typing import NDArray

logger = structlog.get_logger(__name__)


class MatrixCache:
    """Directory of cached arrays.

    Example:
        >>> cache = MatrixCache(Path("out/.cache"))
        >>> key = cache.key("ab12...", "pmi-tensor", "ml", 4, "joint")
        >>> cache.load(key) is None
        True
    """

    def __init__(self, directory: Path) -> None:
        """Create a cache rooted at a directory; it is created on first save."""
        self.directory = directory

    @staticmethod
    def key(input_digest: str, tag: str, estimator: str, bins: int, convention: str) -> str:
        """Cache key for one block of one input."""
        raw = "|".join((input_digest, tag, estimator, str(bins), convention))
        return hashlib.sha256(raw.encode("utf-8")).hexdigest()

    def path(self, key: str) -> Path:
        """File holding an entry."""
        return self.directory / f"{key}.npz"

    def load(self, key: str) -> NDArray[np.float64] | None:
        """Cached array, or None on a miss or an unreadable entry."""
        path = self.path(key)
        if not path.exists():
            logger.debug("cache_miss", key=key[:12])
            return None
        try:
            with np.load(path, allow_pickle=False) as data:
                values = np.asarray(data["values"], dtype=np.float64)
        except (OSError, KeyError, ValueError, zipfile.BadZipFile) as e:
            logger.warning("cache_entry_corrupt", path=str(path), error=str(e))
            return None
        logger.debug("cache_hit", key=key[:12], shape=list(values.shape))
        return values

    def save(self, key: str, values: NDArray[np.float64]) -> Path:
        """Store an array; the write is atomic so readers never see half a file."""
        self.directory.mkdir(parents=True, exist_ok=True)
        target = self.path(key)
        fd, tmp_name = tempfile.mkstemp(dir=self.directory, suffix=".npz.tmp")
        try:
            with os.fdopen(fd, "wb") as handle:
                np.savez(handle, values=values)
            os.replace(tmp_name, target)
        except BaseException:
            Path(tmp_name).unlink(missing_ok=True)
            raise
        logger.debug("cache_saved", key=key[:12], shape=list(values.shape))
        return target
