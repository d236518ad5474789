# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled numeric kernels.

Same call surface and algorithms as ``_fallback``; see that module for the
return conventions.
"""
from libc.math cimport (exp, log, pow, sin, sinh, cosh, sqrt, fabs, floor,
                        lgamma, NAN, INFINITY, M_PI)

cdef double EPS = 2.220446049250313e-16
cdef double _RESCALE = 1e250
cdef double _LOG_RESCALE = 250.0 * 2.302585092994046

cdef double[31] _RG
_RG[:] = [
    0.0, 1.0, 0.5772156649015329, -0.6558780715202539, -0.04200263503409524,
    0.16653861138229148, -0.04219773455554433, -0.009621971527876973,
    0.0072189432466631, -0.0011651675918590652, -0.00021524167411495098,
    0.0001280502823881162, -2.013485478078824e-05, -1.2504934821426706e-06,
    1.133027231981696e-06, -2.056338416977607e-07, 6.116095104481416e-09,
    5.002007644469223e-09, -1.18127457048702e-09, 1.0434267116911005e-10,
    7.782263439905071e-12, -3.696805618642206e-12, 5.100370287454476e-13,
    -2.0583260535665066e-14, -5.348122539423018e-15, 1.2267786282382608e-15,
    -1.1812593016974588e-16, 1.1866922547516004e-18, 1.4123806553180319e-18,
    -2.29874568443537e-19, 1.7144063219273374e-20,
]

cdef double[8] _XGK
_XGK[:] = [
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0,
]
cdef double[8] _WGK
_WGK[:] = [
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
]
cdef double[4] _WG
_WG[:] = [
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
]


cdef inline bint _is_odd(double n) nogil:
    return floor(n * 0.5) * 2.0 != n


cdef inline double _sinpi(double u) nogil:
    cdef double n = floor(u + 0.5)
    cdef double s = sin(M_PI * (u - n))
    if _is_odd(n):
        return -s
    return s


cdef double _rgamma_near1(double z) nogil:
    cdef double s = 0.0
    cdef int k
    for k in range(30, 0, -1):
        s = s * z + _RG[k]
    return s


cdef double _gamma(double u) nogil:
    cdef double f
    if u <= 0.0 and u == floor(u):
        return NAN
    if u < -0.5:
        return M_PI / (_sinpi(u) * (-u) * _gamma(-u))
    if u < 0.5:
        return 1.0 / (u * _rgamma_near1(u))
    if u > 171.7:
        return INFINITY
    f = 1.0
    while u > 1.5:
        u -= 1.0
        f *= u
    return f / _rgamma_near1(u - 1.0)


cdef double _rgamma(double u) nogil:
    cdef double f
    if u <= 0.0 and u == floor(u):
        return 0.0
    if u < -0.5:
        return _sinpi(u) * (-u) * _gamma(-u) / M_PI
    if u < 0.5:
        return u * _rgamma_near1(u)
    if u > 171.7:
        return 0.0
    f = 1.0
    while u > 1.5:
        u -= 1.0
        f *= u
    return _rgamma_near1(u - 1.0) / f


cdef double _i_asymptotic_scaled(double nu, double x, double* rel) nogil:
    cdef double m = 4.0 * nu * nu
    cdef double term = 1.0, s = 1.0, sabs = 1.0, trunc = 0.0, prev = 1.0
    cdef double d, at
    cdef int k = 0
    while True:
        k += 1
        d = 2.0 * k - 1.0
        term *= -(m - d * d) / (8.0 * k * x)
        at = fabs(term)
        if at == 0.0:
            break
        if at <= 0.5 * EPS * fabs(s):
            trunc = at
            break
        if (at > prev and k > 2.0 * nu + 2.0) or k > 300:
            rel[0] = INFINITY
            return NAN
        s += term
        sabs += at
        prev = at
    rel[0] = (trunc + 4.0 * EPS * sabs) / fabs(s) + 2.0 * EPS
    return s / sqrt(2.0 * M_PI * x)


cdef double _i_series_scaled(double nu, double x, double* rel) nogil:
    cdef double q = 0.25 * x * x
    cdef bint logpath = x > 600.0 or nu > 160.0
    cdef double t0 = 0.0, logt0 = 0.0, s = 1.0, r = 1.0, scale = 0.0, ratio
    cdef int k = 0
    if not logpath:
        t0 = pow(0.5 * x, nu) * _rgamma(nu + 1.0) * exp(-x)
        if not (1e-280 < t0 < 1e280):
            logpath = True
    if logpath:
        logt0 = nu * log(0.5 * x) - lgamma(nu + 1.0) - x
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
            rel[0] = INFINITY
            return NAN
    rel[0] = EPS * (3.0 * k + 8.0 + fabs(nu))
    if logpath:
        rel[0] += EPS * (fabs(nu * log(0.5 * x)) + fabs(lgamma(nu + 1.0)) + x + scale + 1.0)
        return exp(logt0 + scale) * s
    return t0 * s


cdef double _i_nonneg_scaled(double nu, double x, double* rel) nogil:
    cdef double val
    if x >= 25.0:
        val = _i_asymptotic_scaled(nu, x, rel)
        if rel[0] <= 1e-14:
            return val
    return _i_series_scaled(nu, x, rel)


cdef int _k_temme(double mu, double x, double* kmu, double* k1, double* rel) nogil:
    cdef double x2 = 0.5 * x
    cdef double pimu = M_PI * mu
    cdef double fact, d, e, fact2, gam1 = 0.0, gam2 = 0.0, mu2 = mu * mu
    cdef double gampl, gammi, ff, total, tabs, p, q, c, sum1, sabs1, dl, dl1
    cdef int k, i
    fact = 1.0 if fabs(pimu) < EPS else pimu / sin(pimu)
    d = -log(x2)
    e = mu * d
    fact2 = 1.0 if fabs(e) < EPS else sinh(e) / e
    for k in range(30, 0, -1):
        if k % 2 == 0:
            gam1 = gam1 * mu2 + _RG[k]
        else:
            gam2 = gam2 * mu2 + _RG[k]
    gam1 = -gam1
    gampl = gam2 - mu * gam1
    gammi = gam2 + mu * gam1
    ff = fact * (gam1 * cosh(e) + gam2 * fact2 * d)
    total = ff
    tabs = fabs(ff)
    e = exp(e)
    p = 0.5 * e / gampl
    q = 0.5 / (e * gammi)
    c = 1.0
    d = x2 * x2
    sum1 = p
    sabs1 = fabs(p)
    i = 0
    while True:
        i += 1
        ff = (i * ff + p + q) / (i * i - mu2)
        c *= d / i
        p /= i - mu
        q /= i + mu
        dl = c * ff
        total += dl
        tabs += fabs(dl)
        dl1 = c * (p - i * ff)
        sum1 += dl1
        sabs1 += fabs(dl1)
        if fabs(dl) < fabs(total) * EPS:
            break
        if i > 1000:
            rel[0] = INFINITY
            return -1
    kmu[0] = total
    k1[0] = sum1 * 2.0 / x
    rel[0] = EPS * (8.0 + i) * max(tabs / fabs(total), sabs1 / fabs(sum1))
    return 0


cdef int _k_steed_scaled(double mu, double x, double* kmu, double* k1, double* rel) nogil:
    cdef double mu2 = mu * mu
    cdef double b = 2.0 * (1.0 + x)
    cdef double d = 1.0 / b
    cdef double h = d, delh = d, q1 = 0.0, q2 = 1.0
    cdef double a1 = 0.25 - mu2
    cdef double q = a1, c = a1, a = -a1
    cdef double s = 1.0 + q * delh
    cdef double qnew, dels
    cdef int i = 1
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
        if fabs(dels / s) < EPS:
            break
        if i > 100000:
            rel[0] = INFINITY
            return -1
    h = a1 * h
    kmu[0] = sqrt(M_PI / (2.0 * x)) / s
    k1[0] = kmu[0] * (mu + x + 0.5 - h) / x
    rel[0] = EPS * (16.0 + i)
    return 0


cdef double _k_scaled(double nu, double x, double* rel) nogil:
    cdef double mu, kmu = 0.0, k1 = 0.0, ex, xi2, tmp
    cdef int nl, i
    nu = fabs(nu)
    nl = <int>(nu + 0.5)
    mu = nu - nl
    if x <= 2.0:
        if _k_temme(mu, x, &kmu, &k1, rel) < 0:
            return NAN
        ex = exp(x)
        kmu *= ex
        k1 *= ex
        rel[0] += EPS
    else:
        if _k_steed_scaled(mu, x, &kmu, &k1, rel) < 0:
            return NAN
    xi2 = 2.0 / x
    for i in range(1, nl + 1):
        tmp = (mu + i) * xi2 * k1 + kmu
        kmu = k1
        k1 = tmp
    rel[0] += 3.0 * EPS * nl
    return kmu


cdef double _i_scaled(double nu, double x, double* rel) nogil:
    cdef double a, iv, irel = 0.0, kv, krel = 0.0, kterm, val
    if nu < 0.0:
        if nu == floor(nu):
            nu = -nu
        elif nu <= -1.0:
            a = -nu
            iv = _i_nonneg_scaled(a, x, &irel)
            kv = _k_scaled(a, x, &krel)
            kterm = (2.0 / M_PI) * _sinpi(a) * kv * exp(-2.0 * x)
            val = iv + kterm
            if val == 0.0:
                rel[0] = INFINITY
                return val
            rel[0] = (fabs(iv) * irel + fabs(kterm) * (krel + 4.0 * EPS)) / fabs(val) + EPS
            return val
    return _i_nonneg_scaled(nu, x, rel)


def sinpi(double u):
    """sin(pi*u) with exact argument reduction."""
    return _sinpi(u)


def gamma(double u):
    return _gamma(u)


def rgamma(double u):
    """1/Gamma(u); exactly zero at the poles."""
    return _rgamma(u)


def bessel_i_scaled(double nu, double x):
    """exp(-x) I_nu(x) for real nu, x > 0; returns (value, relerr)."""
    cdef double rel = 0.0
    cdef double v = _i_scaled(nu, x, &rel)
    return v, rel


def bessel_k_scaled(double nu, double x):
    """exp(x) K_nu(x) for real nu, x > 0; returns (value, relerr)."""
    cdef double rel = 0.0
    cdef double v = _k_scaled(nu, x, &rel)
    return v, rel


def hyp1f2_sum(double a1, double b1, double b2, double z):
    """Compensated partial sum of 1F2(a1; b1, b2; z); see ``_fallback``."""
    cdef double s = 1.0, comp = 0.0, term = 1.0, sabs = 1.0, scale = 0.0
    cdef double ratio, t
    cdef long k = 0
    while True:
        ratio = (a1 + k) / ((b1 + k) * (b2 + k) * (k + 1.0)) * z
        term *= ratio
        k += 1
        t = s + term
        if fabs(s) >= fabs(term):
            comp += (s - t) + term
        else:
            comp += (term - t) + s
        s = t
        sabs += fabs(term)
        if term == 0.0:
            return s + comp, scale, sabs, 0.0, k
        if fabs(ratio) < 0.5 and fabs(term) < 1e-17 * fabs(s + comp):
            return s + comp, scale, sabs, 2.0 * fabs(term), k
        if fabs(s) > _RESCALE:
            s /= _RESCALE
            comp /= _RESCALE
            term /= _RESCALE
            sabs /= _RESCALE
            scale += _LOG_RESCALE
        if k > 200000:
            return s + comp, scale, sabs, fabs(term), -k


cdef inline double _integrand(int kind, double t, double nu, double order,
                              double c, double shift) nogil:
    cdef double rel = 0.0
    if kind == 0:
        return exp(c * t - shift) * _i_scaled(order, t, &rel) * pow(t, -nu)
    return exp(shift - c * t) * _k_scaled(order, t, &rel) * pow(t, -nu)


cdef tuple _gk15(int kind, double a, double b, double nu, double order,
                 double tilt, double shift):
    cdef double c = 1.0 - tilt
    cdef double centr = 0.5 * (a + b)
    cdef double hlgth = 0.5 * (b - a)
    cdef double fc, resg, resk, resabs, reskh, resasc, absc, f1, f2, result, err
    cdef double fv1[7]
    cdef double fv2[7]
    cdef int j
    with nogil:
        fc = _integrand(kind, centr, nu, order, c, shift)
        resg = fc * _WG[3]
        resk = fc * _WGK[7]
        resabs = fabs(resk)
        for j in range(7):
            absc = hlgth * _XGK[j]
            f1 = _integrand(kind, centr - absc, nu, order, c, shift)
            f2 = _integrand(kind, centr + absc, nu, order, c, shift)
            fv1[j] = f1
            fv2[j] = f2
            resk += _WGK[j] * (f1 + f2)
            resabs += _WGK[j] * (fabs(f1) + fabs(f2))
            if j % 2 == 1:
                resg += _WG[j // 2] * (f1 + f2)
        reskh = resk * 0.5
        resasc = _WGK[7] * fabs(fc - reskh)
        for j in range(7):
            resasc += _WGK[j] * (fabs(fv1[j] - reskh) + fabs(fv2[j] - reskh))
        result = resk * hlgth
        resabs *= fabs(hlgth)
        resasc *= fabs(hlgth)
        err = fabs((resk - resg) * hlgth)
        if resasc != 0.0 and err != 0.0:
            err = resasc * min(1.0, pow(200.0 * err / resasc, 1.5))
        err = max(err, 50.0 * EPS * resabs)
    return result, err, resabs


def gk15_i(double a, double b, double nu, double order, double tilt, double shift):
    """GK15 on [a, b] of exp((1-tilt) t - shift) * exp(-t) I_order(t) / t**nu."""
    return _gk15(0, a, b, nu, order, tilt, shift)


def gk15_k(double a, double b, double nu, double order, double tilt, double shift):
    """GK15 on [a, b] of exp(-(1-tilt) t + shift) * exp(t) K_order(t) / t**nu."""
    return _gk15(1, a, b, nu, order, tilt, shift)
