import pytest

# the plotting package is optional; the primary suite must run without it
pytest.importorskip("framealign_plots")
