"""Independent reference values for the safe-speed, CACC and emission-rate
checks, evaluated in 50-digit arithmetic and written out as Rust constants.

    python3 scripts/oracle_vectors.py > crates/platoonsim/tests/acceptance/oracle_vectors.rs
"""

from pathlib import Path

from mpmath import mp, mpf, sqrt

mp.dps = 50
ROOT = Path(__file__).resolve().parent.parent
QUANTITIES = ["CO2", "CO", "NOx", "HC", "fuel"]


def f(x):
    return mpf(float(x))


def safe_speed(vl, vf, g, b, tau):
    vl, vf, g, b, tau = map(f, (vl, vf, g, b, tau))
    v = vl + (g - vl * tau) / ((vl + vf) / (2 * b) + tau)
    return max(v, mpf(0))


def cacc(ego_s, ego_v, pred_s, pred_v, pred_a, lead_v, lead_a, c1, xi, wn, gap_des, pred_len, b_em, a_max):
    (ego_s, ego_v, pred_s, pred_v, pred_a, lead_v, lead_a, c1, xi, wn, gap_des, pred_len, b_em, a_max) = map(
        f, (ego_s, ego_v, pred_s, pred_v, pred_a, lead_v, lead_a, c1, xi, wn, gap_des, pred_len, b_em, a_max)
    )
    e = pred_s - pred_len - ego_s - gap_des
    k = xi + sqrt(xi * xi - 1)
    u = (
        (1 - c1) * pred_a
        + c1 * lead_a
        + (2 * xi - c1 * k) * wn * (pred_v - ego_v)
        + c1 * k * wn * (lead_v - ego_v)
        + wn * wn * e
    )
    return min(max(u, -b_em), a_max)


def coefficients():
    table = {}
    for line in (ROOT / "data" / "ldv_d_eu6.coef").read_text().splitlines():
        words = line.split()
        if words and words[0] in QUANTITIES:
            table[words[0]] = [f(w) for w in words[1:]]
    return table


def rate(c, v, a):
    v, a = f(v), f(a)
    return max(mpf(0), c[0] + c[1] * v * a + c[2] * v * a * a + c[3] * v + c[4] * v * v + c[5] * v**3)


KRAUSS = [
    (10, 10, 20, 2.5, 1),
    (0, 0, 0, 2.5, 1),
    (0, 13.9, 30, 2.5, 1),
    (19.8, 19.8, 5, 2.5, 1),
    (19.8, 19.8, 19.8, 2.5, 1),
    (5, 15, 2, 4.5, 1),
    (12.3, 8.1, 40.5, 2.5, 0.5),
    (20, 0, 100, 2.5, 1),
    (3.3, 3.3, 0.5, 9, 1),
    (0, 20, 1, 2.5, 1),
    (25, 25, 60, 4.5, 1.5),
    (7.77, 11.11, 13.3, 3.0, 0.8),
    (1e-3, 1e-3, 1e-3, 2.5, 1),
    (14, 16, 4, 2.5, 1),
    (16, 14, 4, 2.5, 1),
    (30, 30, 200, 2.5, 2),
    (0.5, 19.9, 2.5, 9, 0.1),
    (9.81, 9.81, 9.81, 9.81, 1),
    (13.8889, 19.4444, 35.2, 2.5, 1),
    (2, 2, 0, 2.5, 1),
    (19.8, 20, 5.1, 2.5, 1),
    (11, 0, 7, 2.5, 1),
]

CACC = [
    # ego_s ego_v pred_s pred_v pred_a lead_v lead_a c1 xi wn gap pred_len b_em a_max
    (0, 19.8, 10.94, 19.8, 0, 19.8, 0, 0.5, 1, 0.2, 5, 5.94, 9, 2.5),
    (0, 19.8, 11.94, 19.8, 0, 19.8, 0, 0.5, 1, 0.2, 5, 5.94, 9, 2.5),
    (0, 19.0, 10.94, 19.8, 0.1, 19.9, 0.2, 0.5, 1, 0.2, 5, 5.94, 9, 2.5),
    (100, 20, 109.5, 19.5, -0.3, 19.2, -0.5, 0.5, 1, 0.2, 5, 5.94, 9, 2.5),
    (0, 10, 50, 20, 0, 20, 0, 0.5, 1, 0.2, 5, 5.94, 9, 2.5),
    (0, 25, 8, 10, -3, 10, -3, 0.5, 1, 0.2, 5, 5.94, 9, 2.5),
    (0, 0, 10.94, 0, 0, 0, 0, 0.5, 1, 0.2, 5, 5.94, 9, 2.5),
    (1234.5, 18.7, 1245.6, 19.1, 0.12, 19.6, 0.05, 0.5, 1, 0.2, 5, 5.94, 9, 2.5),
    (0, 19.8, 10.94, 19.8, 0.1257, 19.8, 0.1257, 0.5, 1, 0.2, 5, 5.94, 9, 2.5),
    (0, 19.8, 10.94, 19.8, 0, 19.8, 0, 0.3, 1.5, 0.2, 5, 5.94, 9, 2.5),
    (0, 18, 12.5, 19, 0.4, 20, 0.1, 0.3, 1.5, 0.4, 5, 5.94, 9, 2.5),
    (0, 18, 12.5, 19, 0.4, 20, 0.1, 0.7, 2, 0.1, 5, 5.94, 9, 2.5),
    (0, 15, 9, 15, 0, 15, 0, 0.5, 1, 1, 2, 4, 6, 1.5),
    (0, 15, 30, 15, 0, 15, 0, 0.5, 1, 1, 2, 4, 6, 1.5),
    (0, 15, 4.5, 15, 0, 15, 0, 0.5, 1, 1, 2, 4, 6, 1.5),
    (50, 12, 61.2, 12.4, -0.2, 13, 0.3, 0.5, 1.2, 0.25, 5, 5.94, 9, 2.5),
    (0, 19.9, 11.0, 19.7, -0.1, 19.6, -0.12, 0.5, 1, 0.2, 5, 5.94, 9, 2.5),
    (0, 19.6, 10.8, 20.0, 0.12, 20.0, 0.0, 0.5, 1, 0.2, 5, 5.94, 9, 2.5),
    (0, 5, 10.94, 5, 2.5, 5, 2.5, 0.5, 1, 0.2, 5, 5.94, 9, 2.5),
    (0, 30, 10.94, 0, -9, 0, -9, 0.5, 1, 0.2, 5, 5.94, 9, 2.5),
    (0, 19.8, 10.94, 19.8, 0, 19.0, -1.0, 0.9, 1, 0.2, 5, 5.94, 9, 2.5),
    (3.25, 16.5, 15.0, 16.5, 0.05, 17.25, 0.35, 0.1, 3, 0.15, 5, 5.94, 9, 2.5),
]

RATES = [
    (q, v, a)
    for q in QUANTITIES
    for v, a in [(0, 0), (19.8, 0), (19.8, 1), (10, -1), (13.9, 0.5), (25, 2.5), (5, -3), (19.8, 2.5)]
] + [("CO2", 30, -9), ("NOx", 17.3, 0.7), ("fuel", 8.8, -0.4)]


def fmt(x):
    return mp.nstr(x, 25, strip_zeros=False, min_fixed=-30, max_fixed=30)


def main():
    out = ["// Generated by scripts/oracle_vectors.py; do not edit by hand.", "// Digits are printed past f64 precision on purpose.", "#![allow(clippy::excessive_precision)]", ""]
    out.append("/// `(v_leader, v_follower, gap, b, tau, expected)`")
    out.append("pub const SAFE_SPEED: &[[f64; 6]] = &[")
    for row in KRAUSS:
        out.append("    [" + ", ".join(repr(float(x)) for x in row) + f", {fmt(safe_speed(*row))}],")
    out.append("];")
    out.append("")
    out.append("/// `(ego_s, ego_v, pred_s, pred_v, pred_a, lead_v, lead_a, c1, xi, omega_n, gap_des,")
    out.append("/// pred_length, b_emergency, a_max, expected)`")
    out.append("pub const CACC: &[[f64; 15]] = &[")
    for row in CACC:
        out.append("    [" + ", ".join(repr(float(x)) for x in row) + f", {fmt(cacc(*row))}],")
    out.append("];")
    out.append("")
    table = coefficients()
    out.append("/// `(quantity, v, a, expected)` against the shipped coefficient file.")
    out.append("pub const RATES: &[(&str, f64, f64, f64)] = &[")
    for q, v, a in RATES:
        out.append(f'    ("{q}", {float(v)!r}, {float(a)!r}, {fmt(rate(table[q], v, a))}),')
    out.append("];")
    print("\n".join(out))


if __name__ == "__main__":
    main()
