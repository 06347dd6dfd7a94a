"""Pure-Python RK4 shooting kernel, used when the extension is not built."""
import math

_TWO_PI = 2.0 * math.pi


def _weval(kind, eps, da, db, par, x):
    y = x / eps
    if kind == 0:
        v = par[0]
    elif kind == 1:
        v = par[0] + par[1] * math.sin(_TWO_PI * par[2] * y)
    elif kind == 2:
        n = len(par)
        f = y - math.floor(y)
        i = int(f * n)
        if i >= n:
            i = n - 1
        v = par[i]
    else:
        n = len(par) - 2
        t = (y - par[0]) / (par[1] - par[0]) * (n - 1)
        if t <= 0.0:
            v = par[2]
        elif t >= n - 1:
            v = par[n + 1]
        else:
            i = min(int(math.floor(t)), n - 2)
            t -= i
            v = (1.0 - t) * par[2 + i] + t * par[3 + i]
    return v + da + db * x


def _phi(z, e):
    if z > 0.0:
        return z ** e
    if z < 0.0:
        return -((-z) ** e)
    return 0.0


def _wrhs(u, alpha, beta, mv, nv, pm1):
    if u > 0.0:
        return -alpha * mv * u ** pm1
    if u < 0.0:
        return beta * nv * (-u) ** pm1
    return 0.0


def _sgn(z):
    return (z > 0.0) - (z < 0.0)


def shoot(p, alpha, beta, mk, meps, mda, mdb, mpar, nk, neps, nda, ndb, npar,
          x0, x1, nsteps, u0, w0, stop_events=-1, us=None, ws=None):
    h = (x1 - x0) / nsteps
    q = 1.0 / (p - 1.0)
    pm1 = p - 1.0
    mpar = [float(v) for v in mpar]
    npar = [float(v) for v in npar]
    u, w = u0, w0
    su, sw = _sgn(u0), _sgn(w0)
    uc = wc = taken = 0
    finite = True
    store = us is not None
    if store:
        us[0] = u0
        ws[0] = w0
    m_pw, n_pw = mk == 2, nk == 2
    for i in range(nsteps):
        x = x0 + i * h
        xm = x + 0.5 * h
        xe = x0 + (i + 1) * h
        if m_pw:
            m0 = mh = m1 = _weval(mk, meps, mda, mdb, mpar, xm)
        else:
            m0 = _weval(mk, meps, mda, mdb, mpar, x)
            mh = _weval(mk, meps, mda, mdb, mpar, xm)
            m1 = _weval(mk, meps, mda, mdb, mpar, xe)
        if n_pw:
            n0 = nh = n1 = _weval(nk, neps, nda, ndb, npar, xm)
        else:
            n0 = _weval(nk, neps, nda, ndb, npar, x)
            nh = _weval(nk, neps, nda, ndb, npar, xm)
            n1 = _weval(nk, neps, nda, ndb, npar, xe)
        k1u = _phi(w, q)
        k1w = _wrhs(u, alpha, beta, m0, n0, pm1)
        k2u = _phi(w + 0.5 * h * k1w, q)
        k2w = _wrhs(u + 0.5 * h * k1u, alpha, beta, mh, nh, pm1)
        k3u = _phi(w + 0.5 * h * k2w, q)
        k3w = _wrhs(u + 0.5 * h * k2u, alpha, beta, mh, nh, pm1)
        k4u = _phi(w + h * k3w, q)
        k4w = _wrhs(u + h * k3u, alpha, beta, m1, n1, pm1)
        u = u + h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u)
        w = w + h / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w)
        taken = i + 1
        if not (math.isfinite(u) and math.isfinite(w)):
            finite = False
            break
        if store:
            us[i + 1] = u
            ws[i + 1] = w
        s = _sgn(u)
        if s:
            if su and s != su:
                uc += 1
            su = s
        s = _sgn(w)
        if s:
            if sw and s != sw:
                wc += 1
            sw = s
        if stop_events >= 0 and uc + wc >= stop_events:
            break
    return u, w, uc, wc, taken, finite
