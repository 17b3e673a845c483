"""Arithmetic-progression / prescribed-norm certification toolkit for F_{q^n}.

Submodules:
    intfact  -- integer factorization, square-free divisor counts, L_e split
    gf       -- arithmetic in F_p, F_q and F_{q^n} (norm, trace, order, ...)
    fqpoly   -- polynomials over F_q, factorization of x^n - 1, Phi_q, mu_q
    freeness -- e-free / g-free predicates, characters, counting functions
    sieve    -- the criteria engine (main inequality, screening, sieve bounds)
    hunter   -- exhaustive / sampled witness search for concrete (q, n, m)
    cli      -- the `apnorm` command line tool
"""

__version__ = "0.1.0"
