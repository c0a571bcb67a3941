//! High-precision reference values shared by unit tests, the verify
//! suites and the acceptance run. Produced offline with mpmath.

/// `(x, erfc(x), erfcx(x))` at 50 digits.
pub const ERFC: &[(f64, f64, f64)] = &[
    (-6.0, 1.9999999999999999785, 8622463094230390.3615),
    (-3.5, 1.9999992569016276586, 417962.42244577031413),
    (-2.0, 1.9953222650189527342, 108.94090438997797241),
    (-1.2, 1.9103139782296353684, 8.06285421706386502),
    (-1.0, 1.8427007929497148693, 5.0089800807622834663),
    (-0.75, 1.7111556336535151316, 3.0031716636274523087),
    (-0.3, 1.3286267594591274162, 1.4537492328427655512),
    (0.0, 1.0, 1.0),
    (0.1, 0.8875370839817151016, 0.89645697996912663666),
    (0.5, 0.47950012218695346232, 0.61569034419292587487),
    (0.9, 0.20309178757716786034, 0.45653165132311703252),
    (0.99, 0.16149193044463020018, 0.43033121306414827169),
    (1.0, 0.15729920705028513066, 0.42758357615580700441),
    (1.01, 0.1531895037717232985, 0.42486681431119998368),
    (1.5, 0.033894853524689272933, 0.32158541645431750235),
    (2.0, 0.0046777349810472658379, 0.25539567631050574387),
    (2.5, 0.00040695201744495893956, 0.21080636406114358065),
    (3.0, 0.000022090496998585441373, 0.17900115118138995042),
    (4.0, 1.5417257900280018852e-8, 0.13699945762506138989),
    (5.0, 1.5374597944280348502e-12, 0.11070463773306862637),
    (6.0, 2.1519736712498913117e-17, 0.092776567800538354389),
    (8.0, 1.122429717298292708e-29, 0.069985166200880927723),
    (10.0, 2.088487583762544757e-45, 0.056140992743822585858),
    (15.0, 7.2129941724512066666e-100, 0.037529606388505765746),
    (20.0, 5.3958656116079009289e-176, 0.028174348741051319319),
    (26.0, 5.6631924088561428465e-296, 0.021683584850562906616),
];

/// `G_T(x, t)` entries `[11, 12, 21, 22]` for a unit-mass particle, 60-digit Talbot inversion.
pub const GT: &[((f64, f64), [f64; 4])] = &[
    ((1.0, 1.0), [0.12848549857852704, -0.14166951349122167, -0.19833731888771036, 0.192803253229024]),
    ((5.0, 3.0), [0.04259770645971756, -0.04742909691451633, -0.06640073568032286, 0.07101268248973001]),
    ((-2.0, 2.0), [0.11791233486244761, 0.11223861392036735, 0.1571340594885143, 0.13833986765466744]),
    ((2.0, 1.0), [0.046626104183510785, -0.06516529766503634, -0.09123141673105087, 0.11707407033941371]),
    ((0.5, 0.5), [0.12122377344169157, -0.16499325524840647, -0.23099055734776905, 0.2636479313065062]),
    ((1.0, 5.0), [0.018276431728435204, -0.009926579957043583, -0.013897211939861017, 0.007052773318430349]),
    ((7.0, 5.0), [0.054972804428407254, -0.05424224030282365, -0.07593913642395311, 0.07280418439701845]),
    ((12.0, 10.0), [0.057117106557317616, -0.05063400652268651, -0.0708876091317611, 0.061797979608125164]),
    ((0.2, 3.0), [0.04927330596831898, -0.027016796395656982, -0.03782351495391978, 0.018397332316997694]),
];

/// `d_x G_T(x, t)`, same source as [`GT`].
pub const DGT: &[((f64, f64), [f64; 4])] = &[
    ((1.0, 1.0), [-0.09307230930906586, 0.06431775465049695, 0.09004485651069573, -0.024376321981314498]),
    ((2.0, 1.0), [-0.06021189389269692, 0.07044796615590292, 0.09862715261826409, -0.09854286157428852]),
    ((5.0, 3.0), [-0.029551979230862536, 0.02841497603001245, 0.03978096644201743, -0.0354092135357559]),
];

/// `(t, G(1, t), G_T(1, t))`, smooth part of `G`, same source as [`GT`].
pub const PAIR: &[(f64, [f64; 4], [f64; 4])] = &[
    (2.0, [0.13267726115106, -0.09214351968197926, -0.12900092755477097, 0.07704035734776599],
    [0.1371334244611379, -0.1076041103470911, -0.15064575448592754, 0.10621224313091422]),
    (5.0, [0.009448884350702192, -0.004314750752041155, -0.006040651052857617, 0.002441967316510304],
    [0.018276431728435204, -0.009926579957043583, -0.013897211939861017, 0.007052773318430349]),
    (10.0, [3.294687514479786e-05, -1.1278318476477752e-05, -1.5789645867068853e-05, 4.8940492261807e-06],
    [0.00014730722660238953, -6.532940825089717e-05, -9.146117155125604e-05, 3.920504705355069e-05]),
    (20.0, [1.3147942623904195e-10, -3.43164306080644e-11, -4.804300285129016e-11, 1.1580611753645842e-11],
    [3.3640963139945506e-09, -1.3434188155912971e-09, -1.880786341827816e-09, 7.45891544028085e-10]),
    (40.0, [5.961362064545053e-22, -1.2002669548298751e-22, -1.6803737367618251e-22, 3.1761001610517696e-23],
    [1.0087463908016674e-18, -3.957972607943375e-19, -5.541161651120725e-19, 2.1739192260395824e-19]),
];

/// Smooth part of `G(x, t)`, 60-digit inversion.
pub const G: &[((f64, f64), [f64; 4])] = &[
    ((1.0, 1.0), [0.17502165323305996, -0.17382839081647017, -0.24335974714305822, 0.20499141421968123]),
    ((0.3, 1.0), [0.2067012121790991, -0.1552601351951961, -0.21736418927327456, 0.12154115946750425]),
    ((5.0, 1.0), [0.00023389628958166842, -0.0005227309680339951, -0.0007318233552475932, 0.0015704503421047553]),
    ((-2.0, 2.0), [0.1386548983054666, 0.12245238031647727, 0.1714333324430682, 0.13771266874461002]),
    ((3.0, 5.0), [0.05389457205782638, -0.03562034784074509, -0.049868486977043124, 0.031108387935484517]),
    ((0.05, 0.2), [0.247946527902351, -0.3663117616102321, -0.5128364662543249, 0.5004599459701038]),
    ((8.0, 5.0), [0.04367528647624675, -0.04483209447475284, -0.06276493226465396, 0.06266388782882185]),
];
