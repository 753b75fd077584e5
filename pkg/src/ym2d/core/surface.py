"""
Surface Maps for the Lattice Theory
===================================

Combinatorial maps of closed orientable surfaces: oriented edges glued into
faces with exact rational areas, plus the observable loops drawn on them.

A face is a cyclic boundary word of (edge id, ±1) letters. Every edge must
occur exactly once with each sign across all faces. Vertices are not stored;
they are the classes of edge endpoints glued by consecutive letters of the
face words, so V - E + F = 2 - 2·genus can be checked directly.

File format (JSON):
    {"genus": 0, "edges": ["e"],
     "faces": [{"word": [["e", 1]], "area": "1/2"},
               {"word": [["e", -1]], "area": "1/2"}],
     "loops": [{"name": "gamma", "word": [["e", 1]]}]}

Sample Input:
    smap = sphere_one_edge(Fraction(1, 2), Fraction(1, 2))
    subdivide(smap, 0, (Fraction(1, 3), Fraction(2, 3)))

Expected Output:
    SurfaceMap with 2 edges, 3 faces, same Euler characteristic 2
"""

from collections import deque
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import cached_property
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from .errors import InvalidParameterError, SurfaceMapError
from .liegroup import ClassFunction
from .utils import load_json_file, parse_fraction, save_json_file

Letter = Tuple[str, int]
Word = Tuple[Letter, ...]


def _as_word(raw: Sequence[Sequence[Any]]) -> Word:
    word = []
    for letter in raw:
        if len(letter) != 2:
            raise SurfaceMapError(f"Word letters are [edge, sign] pairs, got {letter!r}")
        edge, sign = letter
        if sign not in (1, -1):
            raise SurfaceMapError(f"Orientation sign must be +1 or -1, got {sign!r}", edge=edge)
        word.append((str(edge), int(sign)))
    return tuple(word)


@dataclass(frozen=True)
class Face:
    word: Word
    area: Fraction


class _UnionFind:
    def __init__(self):
        self.parent: Dict[Any, Any] = {}

    def add(self, x):
        self.parent.setdefault(x, x)

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


@dataclass(frozen=True)
class SurfaceMap:
    """Immutable combinatorial map of a closed orientable surface."""

    genus: int
    edges: Tuple[str, ...]
    faces: Tuple[Face, ...]
    loops: Tuple[Tuple[str, Word], ...] = ()

    def __post_init__(self):
        if int(self.genus) != self.genus or self.genus < 0:
            raise SurfaceMapError("genus must be a non-negative integer", genus=self.genus)
        if len(set(self.edges)) != len(self.edges):
            raise SurfaceMapError("edge ids must be unique")
        if not self.faces:
            raise SurfaceMapError("a closed surface needs at least one face")

        seen: Dict[str, List[int]] = {e: [] for e in self.edges}
        for index, face in enumerate(self.faces):
            if not face.word:
                raise SurfaceMapError("empty face boundary", face=index)
            if not face.area > 0:
                raise SurfaceMapError("face areas must be positive", face=index, area=str(face.area))
            for edge, sign in face.word:
                if edge not in seen:
                    raise SurfaceMapError(f"face {index} uses unknown edge {edge!r}")
                seen[edge].append(sign)
        for edge, signs in seen.items():
            if sorted(signs) != [-1, 1]:
                raise SurfaceMapError(
                    f"edge {edge!r} must appear once with each orientation", signs=signs
                )

        chi = self.vertex_count - len(self.edges) + len(self.faces)
        if chi != 2 - 2 * self.genus:
            raise SurfaceMapError(
                "Euler characteristic does not match the genus",
                euler_characteristic=chi, genus=self.genus,
            )
        for name, word in self.loops:
            self._check_closed_path(name, word)

    # ----- vertices -----------------------------------------------------

    @staticmethod
    def _start(letter: Letter) -> Tuple[str, str]:
        edge, sign = letter
        return (edge, "tail") if sign > 0 else (edge, "head")

    @staticmethod
    def _end(letter: Letter) -> Tuple[str, str]:
        edge, sign = letter
        return (edge, "head") if sign > 0 else (edge, "tail")

    @cached_property
    def endpoints(self) -> Dict[str, Tuple[int, int]]:
        """edge -> (tail vertex, head vertex), vertices numbered by first appearance."""
        uf = _UnionFind()
        for edge in self.edges:
            uf.add((edge, "tail"))
            uf.add((edge, "head"))
        for face in self.faces:
            word = face.word
            for i, letter in enumerate(word):
                uf.union(self._end(letter), self._start(word[(i + 1) % len(word)]))

        numbering: Dict[Any, int] = {}
        result = {}
        for edge in self.edges:
            ends = []
            for side in ("tail", "head"):
                root = uf.find((edge, side))
                ends.append(numbering.setdefault(root, len(numbering)))
            result[edge] = (ends[0], ends[1])
        return result

    @property
    def vertex_count(self) -> int:
        return len({v for ends in self.endpoints.values() for v in ends})

    @property
    def euler_characteristic(self) -> int:
        return self.vertex_count - len(self.edges) + len(self.faces)

    @property
    def total_area(self) -> Fraction:
        return sum((face.area for face in self.faces), Fraction(0))

    def _check_closed_path(self, name: str, word: Word) -> None:
        if not word:
            raise SurfaceMapError(f"loop {name!r} is empty")
        ends = self.endpoints
        for edge, _ in word:
            if edge not in ends:
                raise SurfaceMapError(f"loop {name!r} uses unknown edge {edge!r}")

        def start(letter):
            tail, head = ends[letter[0]]
            return tail if letter[1] > 0 else head

        def end(letter):
            tail, head = ends[letter[0]]
            return head if letter[1] > 0 else tail

        for i, letter in enumerate(word):
            if end(letter) != start(word[(i + 1) % len(word)]):
                raise SurfaceMapError(f"loop {name!r} is not a closed edge path", position=i)

    def loop(self, name: str) -> Word:
        for loop_name, word in self.loops:
            if loop_name == name:
                return word
        raise InvalidParameterError(f"No loop named {name!r}", loops=[n for n, _ in self.loops])

    # ----- trees ----------------------------------------------------------

    def spanning_tree(self) -> Tuple[str, ...]:
        """Edges of a BFS spanning tree of the vertex graph, in discovery order."""
        ends = self.endpoints
        adjacency: Dict[int, List[Tuple[str, int]]] = {}
        for edge in self.edges:
            tail, head = ends[edge]
            if tail == head:
                continue
            adjacency.setdefault(tail, []).append((edge, head))
            adjacency.setdefault(head, []).append((edge, tail))

        visited = {0}
        tree: List[str] = []
        queue = deque([0])
        while queue:
            v = queue.popleft()
            for edge, w in adjacency.get(v, []):
                if w not in visited:
                    visited.add(w)
                    tree.append(edge)
                    queue.append(w)
        return tuple(tree)

    def faces_of_edge(self, edge: str) -> Tuple[Tuple[int, int], Tuple[int, int]]:
        """((face, position) of the +1 letter, (face, position) of the -1 letter)."""
        found = {}
        for f_index, face in enumerate(self.faces):
            for pos, (e, sign) in enumerate(face.word):
                if e == edge:
                    found[sign] = (f_index, pos)
        return found[1], found[-1]

    # ----- serialization --------------------------------------------------

    def to_dict(self) -> Dict[str, Any]:
        return {
            "genus": self.genus,
            "edges": list(self.edges),
            "faces": [
                {"word": [[e, s] for e, s in face.word], "area": str(face.area)}
                for face in self.faces
            ],
            "loops": [{"name": name, "word": [[e, s] for e, s in word]} for name, word in self.loops],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "SurfaceMap":
        try:
            faces = tuple(
                Face(_as_word(face["word"]), parse_fraction(face["area"])) for face in data["faces"]
            )
            loops = tuple((str(loop["name"]), _as_word(loop["word"])) for loop in data.get("loops", []))
            return cls(int(data["genus"]), tuple(str(e) for e in data["edges"]), faces, loops)
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as e:
            if isinstance(e, SurfaceMapError):
                raise
            raise SurfaceMapError(f"Malformed surface map: {e}") from e

    @classmethod
    def from_json(cls, path: Union[str, Path]) -> "SurfaceMap":
        return cls.from_dict(load_json_file(Path(path)))

    def to_json(self, path: Union[str, Path]) -> None:
        save_json_file(self.to_dict(), Path(path))


def subdivide(
    smap: SurfaceMap, face_id: int, split: Sequence[Union[Fraction, float, str]]
) -> SurfaceMap:
    """
    Split one face by a new edge into two faces with the given area fractions.

    The face word x₁…x_k is cut after x_j (j = max(1, k // 2)); the new edge n
    runs from the start of x₁ to the end of x_j, so the pieces are
    x₁…x_j n⁻¹ and n x_{j+1}…x_k. Vertices are unchanged, E and F grow by one.

    Raises:
        InvalidParameterError: Unknown face, or fractions not positive / not summing to 1
    """
    if not 0 <= face_id < len(smap.faces):
        raise InvalidParameterError("invalid face id", face_id=face_id, faces=len(smap.faces))
    fractions = [parse_fraction(x) for x in split]
    if len(fractions) != 2 or any(p <= 0 for p in fractions) or sum(fractions) != 1:
        raise InvalidParameterError(
            "split must be two positive fractions summing to 1", split=[str(p) for p in fractions]
        )

    k = 0
    while f"s{k}" in smap.edges:
        k += 1
    new_edge = f"s{k}"

    face = smap.faces[face_id]
    j = max(1, len(face.word) // 2)
    first = Face(face.word[:j] + ((new_edge, -1),), face.area * fractions[0])
    second = Face(((new_edge, 1),) + face.word[j:], face.area * fractions[1])
    faces = smap.faces[:face_id] + (first, second) + smap.faces[face_id + 1:]
    return SurfaceMap(smap.genus, smap.edges + (new_edge,), faces, smap.loops)


def sphere_one_edge(area1, area2, loop_name: str = "gamma") -> SurfaceMap:
    """S² cut by one simple closed edge into regions of the given areas."""
    return SurfaceMap(
        0,
        ("e",),
        (Face((("e", 1),), parse_fraction(area1)), Face((("e", -1),), parse_fraction(area2))),
        ((loop_name, (("e", 1),)),),
    )


def genus_polygon(genus: int, area) -> SurfaceMap:
    """The standard 4h-gon a₁b₁a₁⁻¹b₁⁻¹⋯ with one face, for genus h >= 1."""
    if genus < 1:
        raise InvalidParameterError("genus_polygon needs genus >= 1", genus=genus)
    edges: List[str] = []
    word: List[Letter] = []
    for i in range(1, genus + 1):
        a, b = f"a{i}", f"b{i}"
        edges += [a, b]
        word += [(a, 1), (b, 1), (a, -1), (b, -1)]
    return SurfaceMap(genus, tuple(edges), (Face(tuple(word), parse_fraction(area)),))


def torus_one_face(area) -> SurfaceMap:
    return genus_polygon(1, area)


# ============================================
# LOOP CONFIGURATIONS FOR THE EXACT ENGINES
# ============================================


class SurfaceKind(str, Enum):
    SPHERE = "sphere"
    PLANE = "plane"


@dataclass(frozen=True)
class LoopConfig:
    """A simple closed loop on S² (two regions) or on ℝ² (one bounded region)."""

    surface: SurfaceKind
    regions: Tuple[float, ...]
    observable: ClassFunction
    total_area: Optional[float] = None

    def __post_init__(self):
        regions = tuple(float(r) for r in self.regions)
        object.__setattr__(self, "regions", regions)
        if any(not r > 0 for r in regions):
            raise InvalidParameterError("region areas must be positive", regions=list(regions))
        if self.surface is SurfaceKind.SPHERE:
            if len(regions) != 2:
                raise InvalidParameterError("a sphere loop has exactly two regions", regions=list(regions))
            total = sum(regions) if self.total_area is None else float(self.total_area)
            if abs(total - sum(regions)) > 1e-12 * total:
                raise InvalidParameterError(
                    "region areas must sum to the total area", regions=list(regions), total_area=total
                )
            object.__setattr__(self, "total_area", total)
        else:
            if len(regions) != 1:
                raise InvalidParameterError("a plane loop has one bounded region", regions=list(regions))

    @classmethod
    def sphere(cls, area1: float, area2: float, observable: ClassFunction) -> "LoopConfig":
        return cls(SurfaceKind.SPHERE, (area1, area2), observable)

    @classmethod
    def plane(cls, area: float, observable: ClassFunction) -> "LoopConfig":
        return cls(SurfaceKind.PLANE, (area,), observable)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "surface": self.surface.value,
            "regions": list(self.regions),
            "total_area": self.total_area,
            "observable": self.observable.to_dict(),
        }
