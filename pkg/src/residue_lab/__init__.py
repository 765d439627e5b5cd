"""residue_lab: meromorphic Riesz energies of embedded manifolds.

Computes values, poles and residues of the analytically continued energy
z -> integral of |x - y|^z over X x X for curves, surfaces, 4-manifolds and
compact bodies, together with the conformal curvature energies tied to the
residues of 4-dimensional hypersurfaces.
"""

__version__ = "0.1.0"
