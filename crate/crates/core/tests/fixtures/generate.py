"""Regenerates reference_values.json with mpmath, independently of the Rust code."""
import json
import mpmath as mp

mp.mp.dps = 30


def gram_logz(n, m, a):
    # Z_N = N! det[ (1/pi) \int z^j conj(z)^k |z-a|^{2m} e^{-N|z|^2} d^2z ]
    a = mp.mpf(a)

    def entry(j, k):
        def f(r, th):
            z = r * mp.expj(th)
            return (z ** j * mp.conj(z) ** k * abs(z - a) ** (2 * m) * mp.exp(-n * r * r) * r).real

        return mp.quad(f, [0, 1, 2, 4, 8], [0, mp.pi, 2 * mp.pi]) / mp.pi

    g = mp.matrix(n, n)
    for j in range(n):
        for k in range(n):
            g[j, k] = entry(j, k)
    return mp.log(mp.factorial(n) * mp.det(g))


def lue_gap(n, alpha, t, nw):
    def dens(*x):
        v = mp.mpf(1)
        for i in range(n):
            v *= x[i] ** alpha * mp.exp(-nw * x[i])
            for j in range(i):
                v *= (x[i] - x[j]) ** 2
        return v

    num = mp.quad(dens, *([[t, t + 2, t + 8, mp.inf]] * n))
    den = mp.quad(dens, *([[0, 2, 8, mp.inf]] * n))
    return num / den


def tw():
    s0 = mp.mpf(8)
    ai, aip = mp.airyai(s0), mp.airyai(s0, 1)
    f = mp.odefun(
        lambda sg, y: [-y[1], -((-sg) * y[0] + 2 * y[0] ** 3), y[0] ** 2, (-sg) * y[0] ** 2],
        -s0, [ai, aip, 0, 0], tol=mp.mpf(10) ** -28, degree=25)
    t1 = aip ** 2 - s0 * ai ** 2
    t2 = -(s0 ** 2 * ai ** 2 - s0 * aip ** 2 + ai * aip) / 3
    out = []
    for t in [6, 2, 0, -2, -3.1, -5, -8, -10]:
        y = f(mp.mpf(-t))
        out.append({"t": t, "hm_q": float(y[0]), "log_F": float(-((y[3] + t2) - t * (y[2] + t1)))})
    return out


if __name__ == "__main__":
    data = {
        "log_z": [
            {"n": n, "m": m, "a": a, "value": float(gram_logz(n, m, a))}
            for (n, m, a) in [(1, 1, 0.5), (2, 2, 0.5), (2, 1, 1.25), (3, 3, 1.25), (2, 4, 0.75)]
        ],
        "lue_gap": [
            {"n": n, "alpha": al, "t": t, "n_w": nw, "value": float(lue_gap(n, al, t, nw))}
            for (n, al, t, nw) in [(1, 2, 0.5, 2), (2, 1, 0.25, 2), (2, 3, 0.75, 3)]
        ],
        "airy": [{"x": x, "ai": float(mp.airyai(x)), "aip": float(mp.airyai(x, 1))} for x in [-8, -5.5, -1, 0, 1.5, 5, 8]],
        "tracy_widom": tw(),
    }
    with open("reference_values.json", "w") as fh:
        json.dump(data, fh, indent=2)
