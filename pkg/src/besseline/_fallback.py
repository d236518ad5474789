"""Pure-Python numeric kernels.

This module mirrors ``_kernels.pyx`` function for function and is used when
the compiled extension is unavailable (or ``BESSELINE_PURE=1`` is set).
Every routine works on plain floats and signals failure through NaN/inf or
a negative iteration count; argument checking lives in the public modules.

Bessel routines return ``(value, relerr)`` where ``relerr`` is a
conservative estimate of the relative error of ``value``.
"""
import math

EPS = 2.220446049250313e-16
_LN10 = 2.302585092994046
_RESCALE = 1e250
_LOG_RESCALE = 250.0 * _LN10

# Taylor coefficients of 1/Gamma(z) about z = 0: 1/Gamma(z) = sum c[k] z**k.
_RG = (
    0.0,
    1.0,
    0.5772156649015329,
    -0.6558780715202539,
    -0.04200263503409524,
    0.16653861138229148,
    -0.04219773455554433,
    -0.009621971527876973,
    0.0072189432466631,
    -0.0011651675918590652,
    -0.00021524167411495098,
    0.0001280502823881162,
    -2.013485478078824e-05,
    -1.2504934821426706e-06,
    1.133027231981696e-06,
    -2.056338416977607e-07,
    6.116095104481416e-09,
    5.002007644469223e-09,
    -1.18127457048702e-09,
    1.0434267116911005e-10,
    7.782263439905071e-12,
    -3.696805618642206e-12,
    5.100370287454476e-13,
    -2.0583260535665066e-14,
    -5.348122539423018e-15,
    1.2267786282382608e-15,
    -1.1812593016974588e-16,
    1.1866922547516004e-18,
    1.4123806553180319e-18,
    -2.29874568443537e-19,
    1.7144063219273374e-20,
)

# Gauss-Kronrod 7/15 abscissae and weights (QUADPACK qk15).
_XGK = (
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
)
_WGK = (
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
)
_WG = (
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
)


def sinpi(u):
    """sin(pi*u) with exact argument reduction."""
    n = math.floor(u + 0.5)
    s = math.sin(math.pi * (u - n))
    return -s if n % 2 else s


def _rgamma_near1(z):
    """1/Gamma(1 + z) for |z| <= 1."""
    s = 0.0
    for k in range(30, 0, -1):
        s = s * z + _RG[k]
    return s


def gamma(u):
    if u <= 0.0 and u == math.floor(u):
        return math.nan
    if u < -0.5:
        # Gamma(1-u) = (-u) Gamma(-u); -u is exact where 1-u would round
        return math.pi / (sinpi(u) * (-u) * gamma(-u))
    if u < 0.5:
        return 1.0 / (u * _rgamma_near1(u))
    if u > 171.7:
        return math.inf
    f = 1.0
    while u > 1.5:
        u -= 1.0
        f *= u
    return f / _rgamma_near1(u - 1.0)


def rgamma(u):
    """1/Gamma(u); exactly zero at the poles."""
    if u <= 0.0 and u == math.floor(u):
        return 0.0
    if u < -0.5:
        return sinpi(u) * (-u) * gamma(-u) / math.pi
    if u < 0.5:
        return u * _rgamma_near1(u)
    if u > 171.7:
        return 0.0
    f = 1.0
    while u > 1.5:
        u -= 1.0
        f *= u
    return _rgamma_near1(u - 1.0) / f


def _i_asymptotic_scaled(nu, x):
    # Hankel expansion of exp(-x) I_nu(x); returns (value, relerr).
    m = 4.0 * nu * nu
    term = 1.0
    s = 1.0
    sabs = 1.0
    trunc = 0.0
    prev = 1.0
    k = 0
    while True:
        k += 1
        d = 2.0 * k - 1.0
        term *= -(m - d * d) / (8.0 * k * x)
        at = abs(term)
        if at == 0.0:
            break
        if at <= 0.5 * EPS * abs(s):
            trunc = at
            break
        if (at > prev and k > 2.0 * nu + 2.0) or k > 300:
            return math.nan, math.inf
        s += term
        sabs += at
        prev = at
    val = s / math.sqrt(2.0 * math.pi * x)
    return val, (trunc + 4.0 * EPS * sabs) / abs(s) + 2.0 * EPS


def _i_series_scaled(nu, x):
    # Power series of exp(-x) I_nu(x) for nu > -1; returns (value, relerr).
    q = 0.25 * x * x
    logpath = x > 600.0 or nu > 160.0
    t0 = 0.0
    logt0 = 0.0
    if not logpath:
        t0 = math.pow(0.5 * x, nu) * rgamma(nu + 1.0) * math.exp(-x)
        if not (1e-280 < t0 < 1e280):
            logpath = True
    if logpath:
        logt0 = nu * math.log(0.5 * x) - math.lgamma(nu + 1.0) - x
    s = 1.0
    r = 1.0
    k = 0
    scale = 0.0
    while True:
        k += 1
        ratio = q / (k * (k + nu))
        r *= ratio
        s += r
        if r <= 0.5 * EPS * s and ratio < 0.5:
            break
        if s > _RESCALE:
            s /= _RESCALE
            r /= _RESCALE
            scale += _LOG_RESCALE
        if k > 100000:
            return math.nan, math.inf
    # recurrence roundings plus the Gamma product in the leading term
    relerr = EPS * (3.0 * k + 8.0 + abs(nu))
    if logpath:
        arg = logt0 + scale
        relerr += EPS * (abs(nu * math.log(0.5 * x)) + abs(math.lgamma(nu + 1.0)) + x + scale + 1.0)
        return math.exp(arg) * s, relerr
    return t0 * s, relerr


def _i_nonneg_scaled(nu, x):
    # exp(-x) I_nu(x) for nu > -1.
    if x >= 25.0:
        val, rel = _i_asymptotic_scaled(nu, x)
        if rel <= 1e-14:
            return val, rel
    return _i_series_scaled(nu, x)


def _k_temme(mu, x):
    # Temme's series for K_mu(x), K_{mu+1}(x), |mu| <= 1/2, x <= 2 (unscaled).
    x2 = 0.5 * x
    pimu = math.pi * mu
    fact = 1.0 if abs(pimu) < EPS else pimu / math.sin(pimu)
    d = -math.log(x2)
    e = mu * d
    fact2 = 1.0 if abs(e) < EPS else math.sinh(e) / e
    gam1 = 0.0
    gam2 = 0.0
    mu2 = mu * mu
    for k in range(30, 0, -1):
        if k % 2 == 0:
            gam1 = gam1 * mu2 + _RG[k]
        else:
            gam2 = gam2 * mu2 + _RG[k]
    gam1 = -gam1
    gampl = gam2 - mu * gam1
    gammi = gam2 + mu * gam1
    ff = fact * (gam1 * math.cosh(e) + gam2 * fact2 * d)
    total = ff
    tabs = abs(ff)
    e = math.exp(e)
    p = 0.5 * e / gampl
    q = 0.5 / (e * gammi)
    c = 1.0
    d = x2 * x2
    sum1 = p
    sabs1 = abs(p)
    i = 0
    while True:
        i += 1
        ff = (i * ff + p + q) / (i * i - mu2)
        c *= d / i
        p /= i - mu
        q /= i + mu
        dl = c * ff
        total += dl
        tabs += abs(dl)
        dl1 = c * (p - i * ff)
        sum1 += dl1
        sabs1 += abs(dl1)
        if abs(dl) < abs(total) * EPS:
            break
        if i > 1000:
            return math.nan, math.nan, math.inf
    rel = EPS * (8.0 + i) * max(tabs / abs(total), sabs1 / abs(sum1))
    return total, sum1 * 2.0 / x, rel


def _k_steed_scaled(mu, x):
    # Steed's continued fraction for exp(x) K_mu(x), exp(x) K_{mu+1}(x), x > 2.
    mu2 = mu * mu
    b = 2.0 * (1.0 + x)
    d = 1.0 / b
    h = d
    delh = d
    q1 = 0.0
    q2 = 1.0
    a1 = 0.25 - mu2
    q = a1
    c = a1
    a = -a1
    s = 1.0 + q * delh
    i = 1
    while True:
        i += 1
        a -= 2.0 * (i - 1)
        c = -a * c / i
        qnew = (q1 - b * q2) / a
        q1 = q2
        q2 = qnew
        q += c * qnew
        b += 2.0
        d = 1.0 / (b + a * d)
        delh = (b * d - 1.0) * delh
        h += delh
        dels = q * delh
        s += dels
        if abs(dels / s) < EPS:
            break
        if i > 100000:
            return math.nan, math.nan, math.inf
    h = a1 * h
    kmu = math.sqrt(math.pi / (2.0 * x)) / s
    k1 = kmu * (mu + x + 0.5 - h) / x
    return kmu, k1, EPS * (16.0 + i)


def bessel_k_scaled(nu, x):
    """exp(x) K_nu(x) for real nu, x > 0; returns (value, relerr)."""
    nu = abs(nu)
    nl = int(nu + 0.5)
    mu = nu - nl
    if x <= 2.0:
        kmu, k1, rel = _k_temme(mu, x)
        ex = math.exp(x)
        kmu *= ex
        k1 *= ex
        rel += EPS
    else:
        kmu, k1, rel = _k_steed_scaled(mu, x)
    xi2 = 2.0 / x
    for i in range(1, nl + 1):
        kmu, k1 = k1, (mu + i) * xi2 * k1 + kmu
    return kmu, rel + 3.0 * EPS * nl


def bessel_i_scaled(nu, x):
    """exp(-x) I_nu(x) for real nu, x > 0; returns (value, relerr)."""
    if nu < 0.0:
        if nu == math.floor(nu):
            nu = -nu
        elif nu <= -1.0:
            # I_{-a} = I_a + (2/pi) sin(a pi) K_a
            a = -nu
            iv, irel = _i_nonneg_scaled(a, x)
            kv, krel = bessel_k_scaled(a, x)
            kterm = (2.0 / math.pi) * sinpi(a) * kv * math.exp(-2.0 * x)
            val = iv + kterm
            err = abs(iv) * irel + abs(kterm) * (krel + 4.0 * EPS)
            if val == 0.0:
                return val, math.inf
            return val, err / abs(val) + EPS
    return _i_nonneg_scaled(nu, x)


def hyp1f2_sum(a1, b1, b2, z):
    """Compensated partial sum of 1F2(a1; b1, b2; z).

    Returns ``(s, log_scale, abs_sum, tail, nterms)``; the series value is
    ``s * exp(log_scale)`` and ``abs_sum``/``tail`` share that scale.
    ``nterms`` is negative when the iteration cap was hit.
    """
    s = 1.0
    comp = 0.0
    term = 1.0
    sabs = 1.0
    scale = 0.0
    k = 0
    while True:
        ratio = (a1 + k) / ((b1 + k) * (b2 + k) * (k + 1.0)) * z
        term *= ratio
        k += 1
        t = s + term
        if abs(s) >= abs(term):
            comp += (s - t) + term
        else:
            comp += (term - t) + s
        s = t
        sabs += abs(term)
        if term == 0.0:
            return s + comp, scale, sabs, 0.0, k
        if abs(ratio) < 0.5 and abs(term) < 1e-17 * abs(s + comp):
            return s + comp, scale, sabs, 2.0 * abs(term), k
        if abs(s) > _RESCALE:
            s /= _RESCALE
            comp /= _RESCALE
            term /= _RESCALE
            sabs /= _RESCALE
            scale += _LOG_RESCALE
        if k > 200000:
            return s + comp, scale, sabs, abs(term), -k


def _gk15(f, a, b):
    centr = 0.5 * (a + b)
    hlgth = 0.5 * (b - a)
    fc = f(centr)
    resg = fc * _WG[3]
    resk = fc * _WGK[7]
    resabs = abs(resk)
    fv1 = [0.0] * 7
    fv2 = [0.0] * 7
    for j in range(7):
        absc = hlgth * _XGK[j]
        f1 = f(centr - absc)
        f2 = f(centr + absc)
        fv1[j] = f1
        fv2[j] = f2
        resk += _WGK[j] * (f1 + f2)
        resabs += _WGK[j] * (abs(f1) + abs(f2))
        if j % 2 == 1:
            resg += _WG[j // 2] * (f1 + f2)
    reskh = resk * 0.5
    resasc = _WGK[7] * abs(fc - reskh)
    for j in range(7):
        resasc += _WGK[j] * (abs(fv1[j] - reskh) + abs(fv2[j] - reskh))
    result = resk * hlgth
    resabs *= abs(hlgth)
    resasc *= abs(hlgth)
    err = abs((resk - resg) * hlgth)
    if resasc != 0.0 and err != 0.0:
        err = resasc * min(1.0, (200.0 * err / resasc) ** 1.5)
    err = max(err, 50.0 * EPS * resabs)
    return result, err, resabs


def gk15_i(a, b, nu, order, tilt, shift):
    """GK15 on [a, b] of exp((1-tilt) t - shift) * exp(-t) I_order(t) / t**nu."""
    c = 1.0 - tilt

    def f(t):
        return math.exp(c * t - shift) * bessel_i_scaled(order, t)[0] * math.pow(t, -nu)

    return _gk15(f, a, b)


def gk15_k(a, b, nu, order, tilt, shift):
    """GK15 on [a, b] of exp(-(1-tilt) t + shift) * exp(t) K_order(t) / t**nu."""
    c = 1.0 - tilt

    def f(t):
        return math.exp(shift - c * t) * bessel_k_scaled(order, t)[0] * math.pow(t, -nu)

    return _gk15(f, a, b)
