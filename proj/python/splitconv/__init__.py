"""Split-patch FFT convolution engines, cost model and planner."""

try:
    from ._splitconv import *  # noqa: F401,F403
except ImportError:  # build-tree layout: extension sits on sys.path
    from _splitconv import *  # noqa: F401,F403
