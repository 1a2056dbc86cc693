#![allow(clippy::approx_constant, clippy::type_complexity)]
/// Niemeier rows: root system, |L(2)|, Coxeter number, (lambda, multiplicity, mu at pi to 4 truncated decimals).
pub const TABLE24: &[(&str, u64, usize, &[(f64, usize, f64)])] = &[
    ("A1^24", 48, 2, &[(0.0, 276, 0.0018), (8.0, 23, 0.1044)]),
    ("A2^12", 72, 3, &[(0.0, 264, -0.0050), (6.0, 24, 0.0718), (12.0, 11, 0.1488)]),
    ("A3^8", 96, 4, &[(0.0, 252, -0.0120), (4.0, 16, 0.0392), (8.0, 24, 0.0905), (16.0, 7, 0.1931)]),
    ("A4^6", 120, 5, &[(0.0, 240, -0.0189), (4.0, 30, 0.0323), (10.0, 24, 0.1092), (20.0, 5, 0.2375)]),
    ("A5^4+D4", 144, 6, &[(0.0, 230, -0.0259), (4.0, 36, 0.0253), (8.0, 9, 0.0766), (12.0, 20, 0.1279), (24.0, 4, 0.2818)]),
    ("D4^6", 144, 6, &[(0.0, 240, -0.0259), (8.0, 54, 0.0766), (24.0, 5, 0.2818)]),
    ("A6^4", 168, 7, &[(0.0, 216, -0.0328), (4.0, 56, 0.0184), (14.0, 24, 0.1466), (28.0, 3, 0.3262)]),
    ("A7^2+D5^2", 192, 8, &[(0.0, 214, -0.0398), (4.0, 40, 0.0114), (8.0, 20, 0.0627), (12.0, 8, 0.1140), (16.0, 14, 0.1653), (32.0, 3, 0.3705)]),
    ("A8^3", 216, 9, &[(0.0, 192, -0.0467), (4.0, 81, 0.0045), (18.0, 24, 0.1840), (36.0, 2, 0.4149)]),
    ("A9^2+D6", 240, 10, &[(0.0, 189, -0.0537), (4.0, 70, -0.0024), (8.0, 15, 0.0488), (16.0, 5, 0.1514), (20.0, 18, 0.2027), (40.0, 2, 0.4592)]),
    ("D6^4", 240, 10, &[(0.0, 216, -0.0537), (8.0, 60, 0.0488), (16.0, 20, 0.1514), (40.0, 3, 0.4592)]),
    ("E6^4", 288, 12, &[(0.0, 216, -0.0676), (12.0, 80, 0.0862), (48.0, 3, 0.5479)]),
    ("A11+D7+E6", 288, 12, &[(0.0, 185, -0.0676), (4.0, 54, -0.0163), (8.0, 21, 0.0349), (12.0, 20, 0.0862), (20.0, 6, 0.1888), (24.0, 11, 0.2401), (48.0, 2, 0.5479)]),
    ("A12^2", 312, 13, &[(0.0, 144, -0.0746), (4.0, 130, -0.0233), (26.0, 24, 0.2588), (52.0, 1, 0.5923)]),
    ("D8^3", 336, 14, &[(0.0, 192, -0.0815), (8.0, 84, 0.0210), (24.0, 21, 0.2262), (56.0, 2, 0.6366)]),
    ("A15+D9", 384, 16, &[(0.0, 135, -0.0954), (4.0, 104, -0.0441), (8.0, 36, 0.0071), (28.0, 8, 0.2636), (32.0, 15, 0.3149), (64.0, 1, 0.7253)]),
    ("A17+E7", 432, 18, &[(0.0, 119, -0.1093), (4.0, 135, -0.0580), (16.0, 27, 0.0958), (36.0, 17, 0.3523), (72.0, 1, 0.8140)]),
    ("D10+E7^2", 432, 18, &[(0.0, 189, -0.1093), (8.0, 45, -0.0067), (16.0, 54, 0.0958), (32.0, 9, 0.3010), (72.0, 2, 0.8140)]),
    ("D12^2", 528, 22, &[(0.0, 144, -0.1371), (8.0, 132, -0.0345), (40.0, 22, 0.3758), (88.0, 1, 0.9914)]),
    ("A24", 600, 25, &[(4.0, 275, -0.1067), (50.0, 24, 0.4832)]),
    ("D16+E8", 720, 30, &[(0.0, 128, -0.1928), (8.0, 120, -0.0902), (24.0, 35, 0.1150), (56.0, 15, 0.5254), (120.0, 1, 1.3462)]),
    ("E8^3", 720, 30, &[(0.0, 192, -0.1928), (24.0, 105, 0.1150), (120.0, 2, 1.3462)]),
    ("D24", 1104, 46, &[(8.0, 276, -0.2014), (88.0, 23, 0.8246)]),
];
