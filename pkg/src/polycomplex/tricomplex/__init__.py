"""Tricomplexes, the braid functors on their stable category, and the bridge from zigzag complexes."""
from .base import (Q, Tricomplex, TriMorphism, free, koszul_shift, lambda_hat, permute_axes,
                   restrict_line, restrict_partial, simple, tensor, zero)
from .functors import (OUT_SIGNS, apply_word, braid_R, braid_Rprime, d3_cone, functor_U, nat_in,
                       nat_out)
from .stable import (StableIso, fingerprint, free_envelope, module_iso, null_rank, stable_cone,
                     stable_hom, stable_hom_via_cover, stable_iso, stable_shift, strip_free)
from .bridge import bicomplex_bridge, bicomplex_bridge_inverse, functor_G, functor_G_inverse
from .verify import (SUITES, Check, expected_hom, random_tricomplex, suite_braid, suite_bridge,
                     suite_homtable, suite_inverse, suite_tl, verify_braid, verify_inverse,
                     verify_TL)
