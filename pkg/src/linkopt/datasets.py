"""Bundled and fetchable benchmark networks.

The karate-club network ships embedded (34 nodes, 78 edges) so the stats
and optimization commands work out of the box. The remaining benchmark
networks are mapped by the manifest below to their published sources; they
are fetched into the data directory (``SPECAUG_DATA_DIR`` or
``~/.cache/linkopt``) as ``<name>.edges`` plain edge lists. Entries whose
upstream distribution is an archive or a non-edge-list format carry a note;
convert those by hand into ``<name>.edges`` and tooling picks them up.
"""

from __future__ import annotations

import hashlib
import os
import urllib.request
from dataclasses import dataclass
from pathlib import Path

from .errors import LinkoptError
from .graphs import Graph, parse_edge_list

DATA_DIR_ENV = "SPECAUG_DATA_DIR"

# Zachary's karate club: 78 friendship edges among 34 club members,
# original 1-based member ids as labels.
KARATE_EDGES = """\
1 2
1 3
1 4
1 5
1 6
1 7
1 8
1 9
1 11
1 12
1 13
1 14
1 18
1 20
1 22
1 32
2 3
2 4
2 8
2 14
2 18
2 20
2 22
2 31
3 4
3 8
3 9
3 10
3 14
3 28
3 29
3 33
4 8
4 13
4 14
5 7
5 11
6 7
6 11
6 17
7 17
9 31
9 33
9 34
10 34
14 34
15 33
15 34
16 33
16 34
19 33
19 34
20 34
21 33
21 34
23 33
23 34
24 26
24 28
24 30
24 33
24 34
25 26
25 28
25 32
26 32
27 30
27 34
28 34
29 32
29 34
30 33
30 34
31 33
31 34
32 33
32 34
33 34
"""


@dataclass(frozen=True)
class DatasetEntry:
    name: str
    url: str | None
    directed: bool
    sha256: str | None = None
    note: str = ""


MANIFEST: dict[str, DatasetEntry] = {
    "karate": DatasetEntry("karate", None, directed=False, note="bundled"),
    "lesmis": DatasetEntry(
        "lesmis",
        "https://websites.umich.edu/~mejn/netdata/lesmis.zip",
        directed=False,
        note="GML inside zip; convert co-appearance pairs to an edge list",
    ),
    "netscience": DatasetEntry(
        "netscience",
        "https://websites.umich.edu/~mejn/netdata/netscience.zip",
        directed=False,
        note="GML inside zip; drop weights when converting",
    ),
    "illinois_friendship": DatasetEntry(
        "illinois_friendship",
        "http://moreno.ss.uci.edu/hitech.dat",
        directed=True,
        note="friendship choices among Illinois high-school boys; directed",
    ),
    "berlin_traffic": DatasetEntry(
        "berlin_traffic",
        "https://raw.githubusercontent.com/bstabler/TransportationNetworks/master/Berlin-Friedrichshain/friedrichshain-center_net.tntp",
        directed=True,
        note="TNTP road network; keep (init_node, term_node) columns",
    ),
    "celegans_neural": DatasetEntry(
        "celegans_neural",
        "https://websites.umich.edu/~mejn/netdata/celegansneural.zip",
        directed=True,
        note="GML inside zip; directed synapse network",
    ),
}


def data_dir() -> Path:
    root = os.environ.get(DATA_DIR_ENV)
    if root:
        return Path(root)
    return Path.home() / ".cache" / "linkopt"


def karate_graph() -> Graph:
    return parse_edge_list(KARATE_EDGES, directed=False)


def dataset_path(name: str) -> Path:
    return data_dir() / f"{name}.edges"


def load_dataset(name: str) -> Graph:
    """Load a manifest dataset: karate from the embedded fixture, the rest
    from ``<data_dir>/<name>.edges`` (raises if absent)."""
    if name not in MANIFEST:
        raise KeyError(f"unknown dataset {name!r}")
    if name == "karate":
        return karate_graph()
    path = dataset_path(name)
    if not path.exists():
        raise FileNotFoundError(f"dataset {name!r} not present at {path}")
    return parse_edge_list(path.read_text(), directed=MANIFEST[name].directed)


def fetch(name: str, dest: Path | None = None, timeout: float = 60.0) -> Path:
    """Download a manifest dataset's raw source file and verify its hash.

    Stores the payload under the dataset name with the URL's suffix; entries
    whose note mentions conversion still need manual post-processing into
    ``<name>.edges``.
    """
    entry = MANIFEST.get(name)
    if entry is None:
        raise KeyError(f"unknown dataset {name!r}")
    if entry.url is None:
        raise LinkoptError(f"dataset {name!r} is bundled; nothing to fetch")
    target_dir = dest or data_dir()
    target_dir.mkdir(parents=True, exist_ok=True)
    suffix = Path(entry.url).suffix or ".dat"
    target = target_dir / f"{name}{suffix}"
    with urllib.request.urlopen(entry.url, timeout=timeout) as resp:
        payload = resp.read()
    if entry.sha256 is not None:
        digest = hashlib.sha256(payload).hexdigest()
        if digest != entry.sha256:
            raise LinkoptError(f"hash mismatch for {name}: got {digest}")
    target.write_bytes(payload)
    return target
