"""Built-in groups used by ``verify`` and the test-suite."""


def partitions(n, largest=None):
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for k in range(min(n, largest), 0, -1):
        for rest in partitions(n - k, k):
            yield (k,) + rest


def abelian_specs(p, n):
    """Every abelian group of order p^n, one spec per partition of n."""
    if n == 0:
        return ["C(1)"]
    return [f"Ab({p},[{','.join(map(str, part))}])" for part in partitions(n)]


# the constructible part of the order-81 table, with a readable name each
ORDER_81 = {
    "C81": "C(81)",
    "C9xC9": "Ab(3,[2,2])",
    "C27xC3": "Ab(3,[3,1])",
    "C9xC3xC3": "Ab(3,[2,1,1])",
    "EA(3,4)": "EA(3,4)",
    "C27:C3": "SD(3,3,1,10)",
    "3^(1+2)_+ x C3": "ES+(3) x C(3)",
    "3^(1+2)_- x C3": "M(3,3) x C(3)",
}

# every abelian group of order dividing 3^6, and samples at p = 5, 7
ABELIAN = (
    [s for n in range(7) for s in abelian_specs(3, n)]
    + abelian_specs(5, 4)
    + abelian_specs(7, 3)
)

NONABELIAN = [
    "ES+(3)",
    "M(3,3)",
    "SD(3,3,1,10)",
    "SD(3,2,2,4)",
    "ES+(3) x C(3)",
    "M(3,3) x C(3)",
    "M(3,5)",
    "SD(3,3,2,4)",
    "ES+(3) x C(9)",
    "M(3,4) x C(3)",
    "ES+(3) x EA(3,2)",
    "SD(3,4,2,10)",
    "M(3,6)",
    "ES+(3) x ES+(3)",
    "ES+(3) x M(3,3)",
    "ES+(5)",
    "M(5,3)",
    "SD(7,2,1,8)",
]

FULL = ABELIAN + NONABELIAN

# pairs (G, H) with |G x H| <= 3^7
PRODUCT_PAIRS = [
    ("C(3)", "C(3)"),
    ("C(9)", "C(3)"),
    ("SD(3,3,1,10)", "C(3)"),
    ("ES+(3)", "C(3)"),
    ("ES+(3)", "ES+(3)"),
    ("M(3,3)", "ES+(3)"),
    ("M(3,3)", "C(9)"),
    ("SD(3,3,1,10)", "ES+(3)"),
    ("SD(3,2,2,4)", "M(3,3)"),
    ("ES+(3)", "Ab(3,[2,1])"),
    ("C(27)", "M(3,4)"),
    ("EA(3,2)", "SD(3,3,2,4)"),
    ("ES+(5)", "C(5)"),
]

# groups of order <= 27 for randomized biset chains
SMALL = ["C(1)", "C(3)", "C(9)", "EA(3,2)", "C(27)", "Ab(3,[2,1])", "EA(3,3)", "ES+(3)", "M(3,3)"]
