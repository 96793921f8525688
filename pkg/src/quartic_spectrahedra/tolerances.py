"""Numeric tolerance policy shared across the package.

Every approximate comparison in the library goes through one instance of
:class:`Tolerances`, so a CLI flag or a test can tighten or relax the whole
pipeline coherently.  Defaults are the shipped policy; they are deliberate
choices, not universal truths.
"""

from __future__ import annotations

from dataclasses import dataclass, replace, fields


@dataclass(frozen=True)
class Tolerances:
    # point / root handling
    root_cluster: float = 1e-6       # merge radius for root clusters (multiplicity vote)
    dedup: float = 1e-6              # projective distance below which two points are one
    realness: float = 1e-8           # max |Im| after canonical phase normalization
    newton_residual: float = 1e-12   # target residual for Newton polish, times coeff scale
    joint_residual: float = 1e-10    # |f|,|g| at a refined intersection point, times scale
    resultant_gate: float = 1e-8     # a float resultant below scale*this counts as zero

    # nodes
    node_value: float = 1e-10        # |f(x)| / coeff scale at a node
    node_gradient: float = 1e-8      # grad norm / coeff scale at a node
    rank_gate: float = 1e-8          # relative singular-value cutoff for matrix rank
    multistart_budget: int = 500     # complex Gauss-Newton starts
    multistart_stall: int = 200      # consecutive no-new-point starts before stopping

    # projection / reconstruction
    factor_identity: float = 1e-9    # residual for the cofactor factorization identity
    basis_residual: float = 1e-9     # vanishing residual of cubic-basis members at contacts

    # interlacing
    interlace_tie: float = 1e-9      # roots closer than this count as tied (allowed)
    interlace_samples: int = 200     # random lines per interlacing certificate

    # spectrahedra
    interior_min_eig: float = 1e-8   # lambda_min certifying a strict interior point
    interior_starts: int = 64        # multistart budget for the interior search

    # reporting
    psi_residual: float = 1e-10      # gram-map round-trip residual

    def with_overrides(self, **kw: float) -> "Tolerances":
        names = {f.name for f in fields(self)}
        bad = set(kw) - names
        if bad:
            raise ValueError(f"unknown tolerance name(s): {sorted(bad)}")
        typed = {}
        for key, val in kw.items():
            current = getattr(self, key)
            typed[key] = int(val) if isinstance(current, int) else float(val)
        return replace(self, **typed)


DEFAULT_TOL = Tolerances()
