# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled convective kernel.

Operation-for-operation twin of ``wellbalanced.convective_update`` with the
HLL/Rusanov fluxes from ``flux``; results are expected to match the numpy
path bit for bit.
"""
from libc.math cimport sqrt, fabs, M_PI

cdef double SQRT_PI = sqrt(M_PI)

FLUX_KINDS = {"hll": 0, "rusanov": 1}


cdef inline double _vel(double a, double q) nogil:
    if a > 0:
        return q / a
    return 0.0


cdef inline void _numflux(int kind, double al, double ql, double ar, double qr,
                          double ks, double pden, double cden,
                          double* fm, double* fq) nogil:
    cdef double flm, flq, frm, frq, vl, vr, cl, cr, c1, c2, s
    flm = ql
    frm = qr
    if al > 0:
        flq = ql * ql / al + ks * (al * sqrt(al)) / pden
    else:
        flq = 0.0
    if ar > 0:
        frq = qr * qr / ar + ks * (ar * sqrt(ar)) / pden
    else:
        frq = 0.0
    vl = _vel(al, ql)
    vr = _vel(ar, qr)
    cl = sqrt(ks * sqrt(al) / cden)
    cr = sqrt(ks * sqrt(ar) / cden)
    if kind == 0:
        c1 = vl - cl
        if vr - cr < c1:
            c1 = vr - cr
        c2 = vl + cl
        if vr + cr > c2:
            c2 = vr + cr
        if c1 >= 0:
            fm[0] = flm
            fq[0] = flq
        elif c2 <= 0:
            fm[0] = frm
            fq[0] = frq
        else:
            fm[0] = (c2 * flm - c1 * frm) / (c2 - c1) + c1 * c2 / (c2 - c1) * (ar - al)
            fq[0] = (c2 * flq - c1 * frq) / (c2 - c1) + c1 * c2 / (c2 - c1) * (qr - ql)
    else:
        s = fabs(vl) + cl
        if fabs(vr) + cr > s:
            s = fabs(vr) + cr
        fm[0] = 0.5 * (flm + frm) - 0.5 * s * (ar - al)
        fq[0] = 0.5 * (flq + frq) - 0.5 * s * (qr - ql)


def convective_update(const double[::1] a, const double[::1] q,
                      const double[::1] k, const double[::1] cal,
                      double rho, double dt_dx, int kind,
                      double[::1] a_out, double[::1] q_out):
    """Advance the interior of an extended array by one convective step.

    ``a``, ``q``, ``k``, ``cal`` have ``J + 2`` entries (ghosts included);
    ``a_out`` and ``q_out`` receive the ``J`` interior values. Returns the
    number of clamp activations in the reconstruction.
    """
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t j
    cdef Py_ssize_t J = n - 2
    cdef double pden = 3.0 * SQRT_PI * rho
    cdef double cden = 2.0 * rho * SQRT_PI
    cdef double kl, kr, ks, delta, dneg, dpos, s, r
    cdef double al, ql, ar, qr, fm, fq, pl, pr
    cdef double prev_fm = 0.0, prev_fq_right = 0.0
    cdef long clamps = 0
    if q.shape[0] != n or k.shape[0] != n or cal.shape[0] != n:
        raise ValueError("extended arrays must share one length")
    if a_out.shape[0] != J or q_out.shape[0] != J:
        raise ValueError("output arrays must have J = len(a) - 2 entries")
    with nogil:
        for j in range(J + 1):
            kl = k[j]
            kr = k[j + 1]
            ks = kl if kl > kr else kr
            delta = cal[j + 1] - cal[j]
            dneg = delta if delta < 0.0 else 0.0
            dpos = delta if delta > 0.0 else 0.0

            if dneg == 0 and kl == ks:
                al = a[j]
                ql = q[j]
            else:
                s = kl * sqrt(a[j]) + dneg
                if s < 0:
                    clamps += 1
                    s = 0.0
                r = s / ks
                al = r * r
                ql = al * _vel(a[j], q[j])

            if dpos == 0 and kr == ks:
                ar = a[j + 1]
                qr = q[j + 1]
            else:
                s = kr * sqrt(a[j + 1]) - dpos
                if s < 0:
                    clamps += 1
                    s = 0.0
                r = s / ks
                ar = r * r
                qr = ar * _vel(a[j + 1], q[j + 1])

            _numflux(kind, al, ql, ar, qr, ks, pden, cden, &fm, &fq)

            pl = kl * (a[j] * sqrt(a[j])) / pden - ks * (al * sqrt(al)) / pden
            pr = kr * (a[j + 1] * sqrt(a[j + 1])) / pden - ks * (ar * sqrt(ar)) / pden
            if j >= 1:
                a_out[j - 1] = a[j] - dt_dx * (fm - prev_fm)
                q_out[j - 1] = q[j] - dt_dx * ((fq + pl) - prev_fq_right)
            prev_fm = fm
            prev_fq_right = fq + pr
    return clamps


def max_wave_speed(const double[::1] a, const double[::1] q, const double[::1] k, double rho):
    """``max_i(|u_i| + c_i)`` with dry cells contributing zero."""
    cdef Py_ssize_t i, n = a.shape[0]
    cdef double cden = 2.0 * rho * SQRT_PI
    cdef double s, best = 0.0
    with nogil:
        for i in range(n):
            s = fabs(_vel(a[i], q[i])) + sqrt(k[i] * sqrt(a[i]) / cden)
            if s > best or s != s:
                best = s
    return best
