"""stalift: exact computations with finite-dimensional algebras.

Subpackages cover exact linear algebra, algebra and module constructions,
Frobenius parts and AR-quiver knitting, bounded complexes of projectives
with tilting checks, stable equivalences of Morita type, translation-quiver
combinatorics, and a CLI with a certificate-producing lifting machinery.
"""

from .exactla import QQ, GF, FieldSpec, Mat

__all__ = ["QQ", "GF", "FieldSpec", "Mat"]
__version__ = "0.1.0"
