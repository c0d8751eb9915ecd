// Generated by scripts/oracle_vectors.py; do not edit by hand.
// Digits are printed past f64 precision on purpose.
#![allow(clippy::excessive_precision)]

/// `(v_leader, v_follower, gap, b, tau, expected)`
pub const SAFE_SPEED: &[[f64; 6]] = &[
    [10.0, 10.0, 20.0, 2.5, 1.0, 12.00000000000000000000000],
    [0.0, 0.0, 0.0, 2.5, 1.0, 0.0],
    [0.0, 13.9, 30.0, 2.5, 1.0, 7.936507936507936358750580],
    [19.8, 19.8, 5.0, 2.5, 1.0, 18.14080717488789306043379],
    [19.8, 19.8, 19.8, 2.5, 1.0, 19.80000000000000071054274],
    [5.0, 15.0, 2.0, 4.5, 1.0, 4.068965517241379310344828],
    [12.3, 8.1, 40.5, 2.5, 0.5, 19.80000000000000051661732],
    [20.0, 0.0, 100.0, 2.5, 1.0, 36.00000000000000000000000],
    [3.3, 3.3, 0.5, 9.0, 1.0, 1.251219512195121873972823],
    [0.0, 20.0, 1.0, 2.5, 1.0, 0.2000000000000000000000000],
    [25.0, 25.0, 60.0, 4.5, 1.5, 28.18897637795275590551181],
    [7.77, 11.11, 13.3, 3.0, 0.8, 9.564932432432432240335516],
    [0.001, 0.001, 0.001, 2.5, 1.0, 0.001000000000000000020816682],
    [14.0, 16.0, 4.0, 2.5, 1.0, 12.57142857142857142857143],
    [16.0, 14.0, 4.0, 2.5, 1.0, 14.28571428571428571428571],
    [30.0, 30.0, 200.0, 2.5, 2.0, 40.00000000000000000000000],
    [0.5, 19.9, 2.5, 9.0, 0.1, 2.486486486486486602455729],
    [9.81, 9.81, 9.81, 9.81, 1.0, 9.810000000000000497379915],
    [13.8889, 19.4444, 35.2, 2.5, 1.0, 16.66861111279227190671578],
    [2.0, 2.0, 0.0, 2.5, 1.0, 0.8888888888888888888888889],
    [19.8, 20.0, 5.1, 2.5, 1.0, 18.15937500000000061761112],
    [11.0, 0.0, 7.0, 2.5, 1.0, 9.750000000000000000000000],
];

/// `(ego_s, ego_v, pred_s, pred_v, pred_a, lead_v, lead_a, c1, xi, omega_n, gap_des,
/// pred_length, b_emergency, a_max, expected)`
pub const CACC: &[[f64; 15]] = &[
    [0.0, 19.8, 10.94, 19.8, 0.0, 19.8, 0.0, 0.5, 1.0, 0.2, 5.0, 5.94, 9.0, 2.5, -0.00000000000000003552713678800501323786074],
    [0.0, 19.8, 11.94, 19.8, 0.0, 19.8, 0.0, 0.5, 1.0, 0.2, 5.0, 5.94, 9.0, 2.5, 0.03999999999999996891375531],
    [0.0, 19.0, 10.94, 19.8, 0.1, 19.9, 0.2, 0.5, 1.0, 0.2, 5.0, 5.94, 9.0, 2.5, 0.4800000000000000621724894],
    [100.0, 20.0, 109.5, 19.5, -0.3, 19.2, -0.5, 0.5, 1.0, 0.2, 5.0, 5.94, 9.0, 2.5, -0.6876000000000001002975480],
    [0.0, 10.0, 50.0, 20.0, 0.0, 20.0, 0.0, 0.5, 1.0, 0.2, 5.0, 5.94, 9.0, 2.5, 2.500000000000000000000000],
    [0.0, 25.0, 8.0, 10.0, -3.0, 10.0, -3.0, 0.5, 1.0, 0.2, 5.0, 5.94, 9.0, 2.5, -9.000000000000000000000000],
    [0.0, 0.0, 10.94, 0.0, 0.0, 0.0, 0.0, 0.5, 1.0, 0.2, 5.0, 5.94, 9.0, 2.5, -0.00000000000000003552713678800501323786074],
    [1234.5, 18.7, 1245.6, 19.1, 0.12, 19.6, 0.05, 0.5, 1.0, 0.2, 5.0, 5.94, 9.0, 2.5, 0.3013999999999972105757529],
    [0.0, 19.8, 10.94, 19.8, 0.1257, 19.8, 0.1257, 0.5, 1.0, 0.2, 5.0, 5.94, 9.0, 2.5, 0.1256999999999999706457032],
    [0.0, 19.8, 10.94, 19.8, 0.0, 19.8, 0.0, 0.3, 1.5, 0.2, 5.0, 5.94, 9.0, 2.5, -0.00000000000000003552713678800501323786074],
    [0.0, 18.0, 12.5, 19.0, 0.4, 20.0, 0.1, 0.3, 1.5, 0.4, 5.0, 5.94, 9.0, 2.5, 2.073764078649987439933667],
    [0.0, 18.0, 12.5, 19.0, 0.4, 20.0, 0.1, 0.7, 2.0, 0.1, 5.0, 5.94, 9.0, 2.5, 0.8668435565298214523734353],
    [0.0, 15.0, 9.0, 15.0, 0.0, 15.0, 0.0, 0.5, 1.0, 1.0, 2.0, 4.0, 6.0, 1.5, 1.500000000000000000000000],
    [0.0, 15.0, 30.0, 15.0, 0.0, 15.0, 0.0, 0.5, 1.0, 1.0, 2.0, 4.0, 6.0, 1.5, 1.500000000000000000000000],
    [0.0, 15.0, 4.5, 15.0, 0.0, 15.0, 0.0, 0.5, 1.0, 1.0, 2.0, 4.0, 6.0, 1.5, -1.500000000000000000000000],
    [50.0, 12.0, 61.2, 12.4, -0.2, 13.0, 0.3, 0.5, 1.2, 0.25, 5.0, 5.94, 9.0, 2.5, 0.4459993718553312520219807],
    [0.0, 19.9, 11.0, 19.7, -0.1, 19.6, -0.12, 0.5, 1.0, 0.2, 5.0, 5.94, 9.0, 2.5, -0.1975999999999995235366868],
    [0.0, 19.6, 10.8, 20.0, 0.12, 20.0, 0.0, 0.5, 1.0, 0.2, 5.0, 5.94, 9.0, 2.5, 0.2143999999999994503951939],
    [0.0, 5.0, 10.94, 5.0, 2.5, 5.0, 2.5, 0.5, 1.0, 0.2, 5.0, 5.94, 9.0, 2.5, 2.499999999999999964472863],
    [0.0, 30.0, 10.94, 0.0, -9.0, 0.0, -9.0, 0.5, 1.0, 0.2, 5.0, 5.94, 9.0, 2.5, -9.000000000000000000000000],
    [0.0, 19.8, 10.94, 19.8, 0.0, 19.0, -1.0, 0.9, 1.0, 0.2, 5.0, 5.94, 9.0, 2.5, -1.044000000000000197175609],
    [3.25, 16.5, 15.0, 16.5, 0.05, 17.25, 0.35, 0.1, 3.0, 0.15, 5.0, 5.94, 9.0, 2.5, 0.1637948051533946316123261],
];

/// `(quantity, v, a, expected)` against the shipped coefficient file.
pub const RATES: &[(&str, f64, f64, f64)] = &[
    ("CO2", 0.0, 0.0, 937.2222222222000027613831),
    ("CO2", 19.8, 0.0, 3239.482578050582390311460),
    ("CO2", 19.8, 1.0, 8080.582578050582564039159),
    ("CO2", 10.0, -1.0, 0.0),
    ("CO2", 13.9, 0.5, 4037.926721107581805876246),
    ("CO2", 25.0, 2.5, 19578.02083298719980627989),
    ("CO2", 5.0, -3.0, 0.0),
    ("CO2", 19.8, 2.5, 15342.23257805058282463071),
    ("CO", 0.0, 0.0, 0.4586111111000000239990015),
    ("CO", 19.8, 0.0, 0.3047761119800000260236023),
    ("CO", 19.8, 1.0, 0.4784111111000000251217146),
    ("CO", 10.0, -1.0, 0.2932222231000000314121712),
    ("CO", 13.9, 0.5, 0.4115634725200000255895970),
    ("CO", 25.0, 2.5, 0.8124652761000000110100383),
    ("CO", 5.0, -3.0, 0.2882222231000000313080878),
    ("CO", 19.8, 2.5, 0.7388636097800000237688829),
    ("NOx", 0.0, 0.0, 3.769444444399999927242106),
    ("NOx", 19.8, 0.0, 4.805996431111999876215968),
    ("NOx", 19.8, 1.0, 16.46049643089199975843842),
    ("NOx", 10.0, -1.0, 0.0),
    ("NOx", 13.9, 0.5, 6.977842437727999672304986),
    ("NOx", 25.0, 2.5, 44.41874997814999775913591),
    ("NOx", 5.0, -3.0, 0.0),
    ("NOx", 19.8, 2.5, 33.94224643056199958177209),
    ("HC", 0.0, 0.0, 0.009197222200000000624786622),
    ("HC", 19.8, 0.0, 0.1412522213200000093868352),
    ("HC", 19.8, 1.0, 0.2496572213200000099522162),
    ("HC", 10.0, -1.0, 0.02114166620000000433587939),
    ("HC", 13.9, 0.5, 0.1399537493600000056240659),
    ("HC", 25.0, 2.5, 0.5181208321999999952094107),
    ("HC", 5.0, -3.0, 0.0),
    ("HC", 19.8, 2.5, 0.4122647213200000108002879),
    ("fuel", 0.0, 0.0, 0.3525385433279999980449304),
    ("fuel", 19.8, 0.0, 1.218785384805072017031262),
    ("fuel", 19.8, 1.0, 3.040495911117672024993993),
    ("fuel", 10.0, -1.0, 0.0),
    ("fuel", 13.9, 0.5, 1.519289098667703988609256),
    ("fuel", 25.0, 2.5, 7.366925836040499787696481),
    ("fuel", 5.0, -3.0, 0.0),
    ("fuel", 19.8, 2.5, 5.773061700586572036938088),
    ("CO2", 30.0, -9.0, 0.0),
    ("NOx", 17.3, 0.7, 10.95405754520799937051848),
    ("fuel", 8.8, -0.4, 0.3327277830421119760798261),
];
