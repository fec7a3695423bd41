"""Small named configurations used in the documentation, tests and CLI demos."""

VERONESE = (
    (1, 1, 1, 1, 1, 1),
    (0, 1, 2, 0, 1, 0),
    (0, 0, 0, 1, 1, 2),
)

# Sylvester resultant of a cubic and a linear form in one variable
CUBIC_LINEAR = (
    (1, 1, 1, 1, 0, 0),
    (0, 0, 0, 0, 1, 1),
    (0, 1, 2, 3, 0, 1),
)

# two bivariate quadrinomials; the mixed discriminant has degree 126
MIXED_DISCRIMINANT = (
    (1, 1, 1, 1, 0, 0, 0, 0),
    (0, 0, 0, 0, 1, 1, 1, 1),
    (2, 3, 5, 7, 11, 13, 17, 19),
    (19, 17, 13, 11, 7, 5, 3, 2),
)

# monomial map built from linear forms on the graph K4 minus an edge
UV_U = (
    (1, -1, 0, 0),
    (1, 0, -1, 0),
    (0, 1, -1, 0),
    (0, 1, 0, -1),
    (0, 0, 1, -1),
)
UV_V = (
    (3, 3, 0, 0, 0),
    (2, 0, 2, 2, 0),
    (0, 2, 2, 0, 2),
    (0, 0, 0, 3, 3),
)

# Cayley block families: (r, blocks)
THREE_QUADRICS = (1, (((0,), (1,), (2,)),) * 3)
CUBIC_LINEAR_BLOCKS = (1, (((0,), (1,), (2,), (3,)), ((0,), (1,))))
FOUR_TRIANGLES = (
    2,
    (
        ((0, 0), (1, 0), (0, 1)),
        ((0, 0), (1, 0), (1, 1)),
        ((0, 0), (0, 1), (1, 1)),
        ((1, 0), (0, 1), (1, 1)),
    ),
)
NONESSENTIAL = (
    2,
    (
        ((0, 0), (1, 0)),
        ((0, 0), (1, 0)),
        ((0, 0), (1, 0), (0, 1), (1, 1)),
    ),
)
MIXED_DISCRIMINANT_BLOCKS = (
    2,
    (
        ((2, 19), (3, 17), (5, 13), (7, 11)),
        ((11, 7), (13, 5), (17, 3), (19, 2)),
    ),
)
