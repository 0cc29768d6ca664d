"""
Встроенная библиотека моделей (адресуются как builtin:<имя>).
"""

# Наибольшая глубина итерации, допустимая в options.depth
MAX_DEPTH = 3

BUILTIN_MODELS = {
    "euclidean3": {
        "chart": {"coords": ["x", "y", "z"], "domain": {"x": [-1, 1], "y": [-1, 1], "z": [-1, 1]}},
        "metric": [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]],
    },
    "minkowski4": {
        "chart": {
            "coords": ["t", "x", "y", "z"],
            "domain": {"t": [-1, 1], "x": [-1, 1], "y": [-1, 1], "z": [-1, 1]},
        },
        "metric": [
            ["-1", "0", "0", "0"],
            ["0", "1", "0", "0"],
            ["0", "0", "1", "0"],
            ["0", "0", "0", "1"],
        ],
    },
    "sphere2": {
        "chart": {"coords": ["theta", "phi"], "domain": {"theta": [0.3, 2.8], "phi": [-0.5, 7.0]}},
        "metric": [["1", "0"], ["0", "sin(theta)^2"]],
    },
    "schwarzschild": {
        "chart": {
            "coords": ["t", "r", "theta", "phi"],
            "domain": {"t": [0, 10], "r": [3, 10], "theta": [0.3, 2.8], "phi": [0, 6.3]},
        },
        "metric": [
            ["-(1 - 1/r)", "0", "0", "0"],
            ["0", "1/(1 - 1/r)", "0", "0"],
            ["0", "0", "r^2", "0"],
            ["0", "0", "0", "r^2 * sin(theta)^2"],
        ],
    },
    "flat3-omega": {
        "chart": {"coords": ["x1", "x2", "x3"], "domain": {"x1": [-1, 1], "x2": [-1, 1], "x3": [-1, 1]}},
        "metric": [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]],
        "omega": [["0", "x3", "0"], ["-x3", "0", "0"], ["0", "0", "0"]],
    },
    "plane-omega": {
        "chart": {"coords": ["u", "v"], "domain": {"u": [-1, 1], "v": [-1, 1]}},
        "metric": [["1", "0"], ["0", "1 + u^2"]],
        "omega": [["0", "u * v"], ["-u * v", "0"]],
    },
    "schwarzschild-omega": {
        "chart": {
            "coords": ["t", "r", "theta", "phi"],
            "domain": {"t": [0, 10], "r": [3, 10], "theta": [0.3, 2.8], "phi": [0, 6.3]},
        },
        "metric": [
            ["-(1 - 1/r)", "0", "0", "0"],
            ["0", "1/(1 - 1/r)", "0", "0"],
            ["0", "0", "r^2", "0"],
            ["0", "0", "0", "r^2 * sin(theta)^2"],
        ],
        "omega": [
            ["0", "0", "0", "0"],
            ["0", "0", "0", "0"],
            ["0", "0", "0", "r/10"],
            ["0", "0", "-r/10", "0"],
        ],
    },
    "flat4-omega": {
        "chart": {
            "coords": ["x1", "x2", "x3", "x4"],
            "domain": {"x1": [-1, 1], "x2": [-1, 1], "x3": [0.5, 1.5], "x4": [-1, 1]},
        },
        "metric": [
            ["1", "0", "0", "0"],
            ["0", "1", "0", "0"],
            ["0", "0", "1", "0"],
            ["0", "0", "0", "1"],
        ],
        "omega": [
            ["0", "sin(x3)", "0", "0"],
            ["-sin(x3)", "0", "0", "0"],
            ["0", "0", "0", "0"],
            ["0", "0", "0", "0"],
        ],
    },
    "super-1|2": {
        "chart": {"coords": ["x", "th1", "th2"], "parities": [0, 1, 1], "domain": {"x": [-1, 1]}},
        "metric": [["exp(x)", "0", "0"], ["0", "0", "1 + x^2"], ["0", "-1 - x^2", "0"]],
    },
    "degenerate": {
        "chart": {"coords": ["x", "y"], "domain": {"x": [-1, 1], "y": [-1, 1]}},
        "metric": [["1", "x"], ["x", "x^2"]],
    },
}

# Модели для проверок двумя путями
CLASSICAL_MODELS = [
    "euclidean3",
    "minkowski4",
    "sphere2",
    "schwarzschild",
    "flat3-omega",
    "plane-omega",
    "schwarzschild-omega",
]
TORSION_FREE_MODELS = ["euclidean3", "minkowski4", "sphere2", "schwarzschild"]
TORSION_MODELS = ["flat3-omega", "schwarzschild-omega"]
