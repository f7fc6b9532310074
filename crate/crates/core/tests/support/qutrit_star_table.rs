// Published qutrit star-tensor tables.

const H: f64 = 0.866_025_403_784_438_6;

// (k, i, j, value), 1-based, upper triangle
const QUTRIT_STAR_TABLE: &[(usize, usize, usize, f64)] = &[
    (1, 1, 8, 1.0),
    (1, 4, 6, H),
    (1, 5, 7, H),
    (2, 2, 8, 1.0),
    (2, 4, 7, -H),
    (2, 5, 6, H),
    (3, 3, 8, 1.0),
    (3, 4, 4, H),
    (3, 5, 5, H),
    (3, 6, 6, -H),
    (3, 7, 7, -H),
    (4, 1, 6, H),
    (4, 2, 7, -H),
    (4, 3, 4, H),
    (4, 4, 8, -0.5),
    (5, 1, 7, H),
    (5, 2, 6, H),
    (5, 3, 5, H),
    (5, 5, 8, -0.5),
    (6, 1, 4, H),
    (6, 2, 5, H),
    (6, 3, 6, -H),
    (6, 6, 8, -0.5),
    (7, 1, 5, H),
    (7, 2, 4, -H),
    (7, 3, 7, -H),
    (7, 7, 8, -0.5),
    (8, 1, 1, 1.0),
    (8, 2, 2, 1.0),
    (8, 3, 3, 1.0),
    (8, 4, 4, -0.5),
    (8, 5, 5, -0.5),
    (8, 6, 6, -0.5),
    (8, 7, 7, -0.5),
    (8, 8, 8, -1.0),
];
