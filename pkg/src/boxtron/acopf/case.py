"""MATPOWER case files.

Only the parts needed for AC optimal power flow are read: ``mpc.baseMVA`` and
the ``mpc.bus``, ``mpc.gen``, ``mpc.branch`` and ``mpc.gencost`` matrices. All
powers, shunts, limits and cost coefficients are converted to per-unit on
``baseMVA``; out-of-service generators and branches and isolated buses
(type 4) are dropped.
"""
from __future__ import annotations

import dataclasses
import logging
import re
from pathlib import Path

import numpy as np

from boxtron.errors import CaseParseError

LOGGER = logging.getLogger(__name__)

CASES_DIRECTORY = Path(__file__).with_name("cases")
BUNDLED_CASES = tuple(sorted(path.stem for path in CASES_DIRECTORY.glob("*.m")))

REQUIRED_BLOCKS = ("bus", "gen", "branch", "gencost")
MIN_COLUMNS = {"bus": 13, "gen": 10, "branch": 11, "gencost": 4}

BUS_TYPE_REF = 3
BUS_TYPE_ISOLATED = 4
COST_MODEL_PIECEWISE = 1
COST_MODEL_POLYNOMIAL = 2

_ASSIGNMENT = re.compile(r"^mpc\.(\w+)\s*=\s*(.*)$")


@dataclasses.dataclass(frozen=True)
class Bus:
    """A bus, loads and shunts in per-unit."""

    id: int
    type: int
    pd: float
    qd: float
    gs: float
    bs: float
    vmin: float
    vmax: float


@dataclasses.dataclass(frozen=True)
class Generator:
    """An in-service generator, limits in per-unit."""

    bus: int
    pmin: float
    pmax: float
    qmin: float
    qmax: float
    status: int = 1


@dataclasses.dataclass(frozen=True)
class GenCost:
    """Polynomial cost ``c2 p^2 + c1 p + c0`` in $/h of the per-unit output ``p``."""

    c2: float
    c1: float
    c0: float

    def __call__(self, p):
        return self.c2 * p * p + self.c1 * p + self.c0


@dataclasses.dataclass(frozen=True)
class Branch:
    """An in-service branch. ``shift`` is in degrees, ``rate_a`` in per-unit (0 means unlimited)."""

    from_bus: int
    to_bus: int
    r: float
    x: float
    b: float
    tap: float
    shift: float
    rate_a: float
    status: int = 1


@dataclasses.dataclass
class NetworkCase:
    """A parsed network, see :func:`parse_matpower`."""

    base_mva: float
    buses: list[Bus]
    generators: list[Generator]
    gencost: list[GenCost]
    branches: list[Branch]
    name: str = ""

    def bus_index(self) -> dict[int, int]:
        """Maps bus ids to their position in :attr:`buses`."""
        return {bus.id: i for i, bus in enumerate(self.buses)}

    def reference_bus(self) -> int:
        """Position of the reference bus.

        The first type 3 bus, or the first bus with a generator if the case has none.
        """
        for i, bus in enumerate(self.buses):
            if bus.type == BUS_TYPE_REF:
                return i
        index = self.bus_index()
        fallback = index[self.generators[0].bus] if self.generators else 0
        LOGGER.warning("Case %s has no reference bus, using bus %d", self.name, self.buses[fallback].id)
        return fallback

    def total_cost(self, pg) -> float:
        """Generation cost in $/h of the per-unit dispatch ``pg``."""
        return float(sum(cost(p) for cost, p in zip(self.gencost, np.asarray(pg, dtype=float))))


def _read_blocks(text: str) -> tuple[float | None, dict[str, list[tuple[int, list[float]]]]]:
    base_mva = None
    blocks: dict[str, list[tuple[int, list[float]]]] = {}
    current = None
    skipping_cell = False

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("%", 1)[0].strip()
        if not line:
            continue
        if skipping_cell:
            skipping_cell = "}" not in line
            continue

        if current is None:
            match = _ASSIGNMENT.match(line)
            if not match:
                continue
            key, rest = match.groups()
            rest = rest.strip()
            if key == "baseMVA":
                try:
                    base_mva = float(rest.rstrip(";").strip())
                except ValueError as e:
                    raise CaseParseError(f"invalid baseMVA {rest!r}", lineno, "mpc.baseMVA") from e
                continue
            if rest.startswith("{"):
                skipping_cell = "}" not in rest
                continue
            if not rest.startswith("["):
                continue
            current = key
            if key in blocks:
                raise CaseParseError("block defined twice", lineno, f"mpc.{key}")
            blocks[key] = []
            line = rest[1:]

        closed = "]" in line
        if closed:
            line = line.split("]", 1)[0]
        for chunk in line.split(";"):
            values = chunk.replace(",", " ").split()
            if not values:
                continue
            try:
                blocks[current].append((lineno, [float(v) for v in values]))
            except ValueError as e:
                raise CaseParseError(f"malformed row {chunk.strip()!r}", lineno, f"mpc.{current}") from e
        if closed:
            current = None

    if current is not None:
        raise CaseParseError("block is not terminated with ']'", block=f"mpc.{current}")
    return base_mva, blocks


def _check_columns(block: str, rows: list[tuple[int, list[float]]]):
    for lineno, row in rows:
        if len(row) < MIN_COLUMNS[block]:
            raise CaseParseError(
                f"malformed row: expected at least {MIN_COLUMNS[block]} columns, got {len(row)}",
                lineno,
                f"mpc.{block}",
            )


def _cost(lineno: int, row: list[float], base_mva: float) -> GenCost:
    model = int(row[0])
    if model == COST_MODEL_PIECEWISE:
        raise CaseParseError("piecewise linear generator costs are not supported", lineno, "mpc.gencost")
    if model != COST_MODEL_POLYNOMIAL:
        raise CaseParseError(f"unknown cost model {model}", lineno, "mpc.gencost")
    ncost = int(row[3])
    coefficients = row[4 : 4 + ncost]
    if ncost > 3 and any(c != 0.0 for c in coefficients[: ncost - 3]):
        raise CaseParseError(f"polynomial costs of degree {ncost - 1} are not supported", lineno, "mpc.gencost")
    if len(coefficients) != ncost:
        raise CaseParseError(f"expected {ncost} cost coefficients", lineno, "mpc.gencost")
    c2, c1, c0 = ([0.0, 0.0, 0.0] + list(coefficients))[-3:]
    return GenCost(c2=c2 * base_mva**2, c1=c1 * base_mva, c0=c0)


def parse_matpower(text: str, name: str = "") -> NetworkCase:
    """Parses the contents of a MATPOWER case file.

    Comments (``%``) are stripped, rows may be separated by newlines or
    semicolons and columns by whitespace or commas.

    Args:
        text (str): case file contents
        name (str): name for log messages and reports

    Returns:
        NetworkCase:

    Raises:
        CaseParseError: for a missing block, a malformed row, an unsupported cost
            model, or a generator or branch that refers to a bus that does not exist
    """
    base_mva, blocks = _read_blocks(text)
    if base_mva is None:
        raise CaseParseError("missing required block mpc.baseMVA", block="mpc.baseMVA")
    if not base_mva > 0:
        raise CaseParseError(f"baseMVA must be positive, got {base_mva}", block="mpc.baseMVA")
    for block in REQUIRED_BLOCKS:
        if block not in blocks:
            raise CaseParseError(f"missing required block mpc.{block}", block=f"mpc.{block}")
        _check_columns(block, blocks[block])

    known_ids = set()
    buses = []
    for lineno, row in blocks["bus"]:
        bus_id = int(row[0])
        if bus_id in known_ids:
            raise CaseParseError(f"duplicate bus id {bus_id}", lineno, "mpc.bus")
        known_ids.add(bus_id)
        vmax, vmin = row[11], row[12]
        if vmin > vmax:
            raise CaseParseError(f"bus {bus_id} has Vmin > Vmax", lineno, "mpc.bus")
        if int(row[1]) == BUS_TYPE_ISOLATED:
            LOGGER.debug("dropping isolated bus %d", bus_id)
            continue
        buses.append(
            Bus(
                id=bus_id,
                type=int(row[1]),
                pd=row[2] / base_mva,
                qd=row[3] / base_mva,
                gs=row[4] / base_mva,
                bs=row[5] / base_mva,
                vmin=vmin,
                vmax=vmax,
            )
        )
    active_ids = {bus.id for bus in buses}

    def endpoint(bus_id: int, lineno: int, block: str) -> bool:
        if bus_id not in known_ids:
            raise CaseParseError(f"reference to unknown bus {bus_id}", lineno, f"mpc.{block}")
        return bus_id in active_ids

    gen_rows = blocks["gen"]
    cost_rows = blocks["gencost"]
    if len(cost_rows) < len(gen_rows):
        raise CaseParseError(
            f"{len(gen_rows)} generators but only {len(cost_rows)} cost rows", block="mpc.gencost"
        )
    generators, gencost = [], []
    for (lineno, row), (cost_lineno, cost_row) in zip(gen_rows, cost_rows):
        bus_id = int(row[0])
        on_active_bus = endpoint(bus_id, lineno, "gen")
        if row[7] <= 0 or not on_active_bus:
            continue
        pmax, pmin = row[8] / base_mva, row[9] / base_mva
        qmax, qmin = row[3] / base_mva, row[4] / base_mva
        if pmin > pmax or qmin > qmax:
            raise CaseParseError(f"generator at bus {bus_id} has inconsistent limits", lineno, "mpc.gen")
        generators.append(Generator(bus=bus_id, pmin=pmin, pmax=pmax, qmin=qmin, qmax=qmax, status=int(row[7])))
        gencost.append(_cost(cost_lineno, cost_row, base_mva))

    branches = []
    for lineno, row in blocks["branch"]:
        from_bus, to_bus = int(row[0]), int(row[1])
        active = endpoint(from_bus, lineno, "branch") & endpoint(to_bus, lineno, "branch")
        if row[10] <= 0 or not active:
            continue
        branches.append(
            Branch(
                from_bus=from_bus,
                to_bus=to_bus,
                r=row[2],
                x=row[3],
                b=row[4],
                tap=row[8] if row[8] != 0.0 else 1.0,
                shift=row[9],
                rate_a=row[5] / base_mva,
                status=int(row[10]),
            )
        )

    case = NetworkCase(base_mva, buses, generators, gencost, branches, name)
    LOGGER.debug(
        "parsed case %s: %d buses, %d generators, %d branches", name, len(buses), len(generators), len(branches)
    )
    return case


def bundled_case(name: str) -> NetworkCase:
    """Loads one of the cases shipped with boxtron, e.g. ``case9``.

    Raises:
        FileNotFoundError: if there is no bundled case of that name
    """
    path = CASES_DIRECTORY / f"{name}.m"
    if not path.is_file():
        raise FileNotFoundError(f"No bundled case {name!r}, available: {', '.join(BUNDLED_CASES)}")
    return parse_matpower(path.read_text(encoding="UTF-8"), name)


def load_case(path_or_name: str | Path) -> NetworkCase:
    """Loads a case from a file path, or a bundled case by name.

    Raises:
        FileNotFoundError: if neither a file nor a bundled case matches
        CaseParseError: if the file can not be parsed
    """
    path = Path(path_or_name).expanduser()
    if path.is_file():
        return parse_matpower(path.read_text(encoding="UTF-8"), path.stem)
    if str(path_or_name) in BUNDLED_CASES:
        return bundled_case(str(path_or_name))
    raise FileNotFoundError(f"Case file {path_or_name} does not exist")
