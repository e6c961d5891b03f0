# cython: language_level=3, binding=True
# Compiled twin of ncx._kernel: the include keeps one source of truth, so the
# extension and the pure-Python fallback cannot diverge.
include "_kernel.py"
