"""
Константы раскладок индексов и знаковых соглашений.
"""

# Раскладки массивов компонент
INDEX_LAYOUTS = {
    "christoffel_first": "gamma[delta, beta, mu] = d_mu tau_(beta delta) + d_beta tau_(delta mu) - d_delta tau_(beta mu)",
    "christoffel": "Gamma[alpha, mu, beta]: alpha upper, mu direction (slot d2), beta argument (slot d1)",
    "torsion": "T[alpha, mu, beta] = Gamma[alpha, mu, beta] - Gamma[alpha, beta, mu]",
    "riemann": "R[sigma, mu, delta, alpha] = R_(sigma mu)_delta^alpha",
    "ricci": "Ricci[mu, delta] = sum_alpha R[mu, alpha, delta, alpha]",
    "covariant_derivative": "(nabla s)[beta_1 .. beta_k, mu], direction index last",
    "super_christoffel": "Gamma[alpha, mu, beta] with graded signs",
    "super_riemann": "R[gamma, beta, alpha, nu] = R_(gamma beta)_alpha^nu",
}

# Знаковые соглашения
SIGN_CONVENTIONS = {
    "koszul": "(-1)^(p*p' + sum a_i*b_i), parity of d_S x^mu equals parity of x^mu",
    "generator_order": "(|S|, S, coordinate index)",
    "antisymmetrization": "weight 1/m!",
    "insertion_order": "i^(k) applied first, i^(1) last",
    "super_inverse": "(-1)^(gamma*alpha) g_(nu alpha) g^(nu gamma) = delta",
    "quadratic_sign_base": "(-) read as (-1)",
}

# Константы, получаемые подгонкой в этой раскладке
EXPECTED_FITS = {
    "antisymmetric": -3 / 2,
    "symmetric": -9 / 4,
}


def convention_ledger(measured: dict | None = None) -> dict:
    """Сводка соглашений для отчёта; measured дополняет её измеренными величинами."""
    ledger = {
        "layouts": dict(INDEX_LAYOUTS),
        "signs": dict(SIGN_CONVENTIONS),
        "expected_fits": dict(EXPECTED_FITS),
    }
    if measured:
        ledger["measured"] = dict(measured)
    return ledger
