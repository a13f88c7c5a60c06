"""Named presets: the worked singular-curve examples as ready-made sessions.

Each preset expands to ordinary session text, so presets run through the
same parser and engine as user files and inherit full determinism.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Callable


@dataclass(frozen=True)
class Preset:
    name: str
    description: str
    expectation: str
    parameters: tuple[str, ...]
    build: Callable[..., str]


def _orders(a: int, i: int, j: int) -> tuple[int, int]:
    """Smallest positive alpha, beta with i*alpha = j*beta = 0 mod a."""
    return a // gcd(i, a), a // gcd(j, a)


def _node(a: int = 3, i: int = 1, j: int = 2) -> str:
    alpha, beta = _orders(a, i, j)
    return f"""\
ring A = Q[u,v]/(u*v) degrees {{u:{alpha}, v:{beta}}}
ring B = Q[x,y]/(x*y) group {a} weights {{x:{i}, y:{j}}}
map p : A -> B {{ u = x^{alpha}, v = y^{beta} }}
dualize-finite p depth 4
"""


def _pushforward_node(a: int = 3, i: int = 1, j: int = 2) -> str:
    return _node(a, i, j) + "check pushforward p B A bound 8\n"


def _cusp_line() -> str:
    return """\
ring A = Q[u] degrees {u:2}
ring B = Q[x,y]/(y^2 - x^3) group 2 weights {x:0, y:1} degrees {x:2, y:3}
map f : A -> B { u = x }
module WB over B gens w:(-3,1)
dualize-finite f depth 4
check pushforward f WB A bound 8
"""


def _tacnode_node() -> str:
    return """\
ring A = Q[u,w]/(w^2 - u^2) degrees {u:2, w:2}
ring B = Q[x,y]/(y^2 - x^4) group 2 weights {x:1, y:0} degrees {x:1, y:2}
map f : A -> B { u = x^2, w = y }
dualize-finite f depth 4
"""


def _tacnode_cusp() -> str:
    return """\
ring A = Q[u,t]/(t^2 - u^3) degrees {u:2, t:3}
ring B = Q[x,y]/(y^2 - x^4) group 2 weights {x:1, y:1} degrees {x:1, y:2}
map f : A -> B { u = x^2, t = x*y }
dualize-finite f depth 4
"""


def _triple_point(a: int = 3) -> str:
    w = ", ".join(f"{v}:1" for v in "uvt")
    return f"""\
ring C = Q[u,v,t] group {a} weights {{{w}}}
ext C ideal (u*v - t^2, u*t - v^2, v*t - u^2) omega C max 3
check gorenstein C ideal (u*v - t^2, u*t - v^2, v*t - u^2) max 3
"""


def _root_cover(a: int = 3) -> str:
    return f"""\
ring A = Q[u] degrees {{u:{a}}}
ring B = Q[t] group {a} weights {{t:1}}
map tau : A -> B {{ u = t^{a} }}
dualize-finite tau depth 4
"""


def _p146_curve() -> str:
    return """\
ring C = Q[x,y,z] degrees {x:1, y:4, z:6}
dualize-lci C seq (z*x^2 - y^2) omega canonical depth 4
"""


def _pija_node(i: int = 1, j: int = 2, a: int = 3) -> str:
    return f"""\
ring C = Q[x,y,z] degrees {{x:{i}, y:{j}, z:{a}}}
dualize-lci C seq (x*y) omega canonical depth 3
"""


def _balanced_node() -> str:
    return """\
ring C = Q[t,u] group 3 weights {t:1, u:1} degrees {t:0, u:0}
dualize-lci C seq (t^5 - u^2 + t^2) omega canonical depth 2
"""


PRESETS: dict[str, Preset] = {p.name: p for p in [
    Preset("balanced-node",
           "irreducible balanced node chart t^5 - u^2 + t^2 under mu_3",
           "dualizing module is the structure sheaf: weight 0",
           (), _balanced_node),
    Preset("cusp-line",
           "cusp y^2 = x^3 with mu_2 over the affine line",
           "free rank 1, generator weight -1 mod 2; pushforward equal",
           (), _cusp_line),
    Preset("node",
           "orbifold node [Spec k[x,y]/(xy) / mu_a] over its moduli node",
           "free rank 1, generator weight 0, Ext^1..4 = 0",
           ("a", "i", "j"), _node),
    Preset("p146-curve",
           "the curve z*x^2 = y^2 in P(1,4,6)",
           "dualizing sheaf O(-3)",
           (), _p146_curve),
    Preset("pija-node",
           "reducible node x*y = 0 closed up in P(i,j,a)",
           "dualizing sheaf O(-a)",
           ("i", "j", "a"), _pija_node),
    Preset("pushforward-node",
           "node duality plus the invariant-part pushforward check",
           "invariants of omega_B match omega_A up to bound 8",
           ("a", "i", "j"), _pushforward_node),
    Preset("root-cover",
           "degree-a root cover Q[u] -> Q[t], u = t^a",
           "free rank 1, generator weight -(a-1) mod a",
           ("a",), _root_cover),
    Preset("tacnode-cusp",
           "tac-node y^2 = x^4 with mu_2 over a cuspidal moduli curve",
           "free rank 1, generator weight 0 (trivial coaction)",
           (), _tacnode_cusp),
    Preset("tacnode-node",
           "tac-node y^2 = x^4 with mu_2 over a nodal moduli curve",
           "free rank 1, generator weight -1 mod 2",
           (), _tacnode_node),
    Preset("triple-point",
           "triple point k[u,v,t]/(uv-t^2, ut-v^2, vt-u^2) under mu_a",
           "Ext^2 with 2 minimal generators, CM true, Gorenstein false",
           ("a",), _triple_point),
]}


def list_presets() -> list[tuple[str, str, str]]:
    """(name, description, expected verdict) rows, sorted by name."""
    return [(p.name, p.description, p.expectation)
            for p in sorted(PRESETS.values(), key=lambda p: p.name)]


def preset_session(name: str, **params) -> str:
    if name not in PRESETS:
        raise KeyError(f"unknown preset {name!r}; see list-presets")
    preset = PRESETS[name]
    unknown = set(params) - set(preset.parameters)
    if unknown:
        raise KeyError(f"preset {name} does not take {sorted(unknown)}")
    return preset.build(**params)
