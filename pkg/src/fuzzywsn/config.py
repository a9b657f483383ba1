"""INI config files for :class:`~fuzzywsn.sim.SimConfig`.

Every section and key is optional and falls back to the built-in default.
Unknown sections or keys are errors, reported with the line they sit on.
Radio constants are written in the units people quote them in (nJ/bit,
pJ/bit/m^2, pJ/bit/m^4) and converted to joules on load.
"""

from __future__ import annotations

import configparser
import re
from decimal import Decimal
from dataclasses import replace
from importlib import resources
from pathlib import Path

from . import rulebases
from .fuzzy import FuzzyConfigError
from .network import BaseStation
from .sim import SimConfig

PAPER_CONFIG = "paper.cfg"


class ConfigError(ValueError):
    def __init__(self, message, source="<config>", line=None):
        self.source = source
        self.line = line
        where = source if line is None else f"{source}:{line}"
        super().__init__(f"{where}: {message}")


_SIMULATION = {
    "protocol": str, "seed": int, "rounds": int, "width": float, "height": float,
    "bs_x": float, "bs_y": float, "k": int, "compression": float, "kmeans_max_iter": int, "kmeans_n_init": int,
}
# key -> (RadioParams field, decimal exponent to SI)
_RADIO = {
    "e_elec_nj": ("e_elec", -9),
    "eps_fs_pj": ("eps_fs", -12),
    "eps_amp_pj": ("eps_amp", -12),
    "e_da_nj": ("e_da", -9),
    "data_bits": ("data_bits", None),
    "info_bits": ("info_bits", None),
}
_NETWORK = {"n": int, "mf": float, "mp": float, "e": float,
            "e_normal": float, "e_advanced": float, "e_super": float}
_LEACH = {"p_opt": float}
_EDEEC = {"p_opt": float, "r_estimate": str, "normalization": str, "a": float, "b": float}
_RULEBASES = {"election": 3, "relay": 2}


def _line_index(text: str) -> dict:
    """(section, key) -> line number; (section, None) for the header."""
    index, section = {}, None
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line[0] in "#;":
            continue
        m = re.fullmatch(r"\[([^\]]+)\]", line)
        if m:
            section = m.group(1).strip()
            index.setdefault((section, None), no)
            continue
        m = re.match(r"([^=:]+?)\s*[=:]", line)
        if m and section is not None:
            index.setdefault((section, m.group(1).strip().lower()), no)
    return index


class _Reader:
    def __init__(self, text: str, source: str):
        self.source = source
        self.lines = _line_index(text)
        self.cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
        try:
            self.cp.read_string(text, source=source)
        except configparser.Error as exc:
            line = getattr(exc, "lineno", None)
            raise ConfigError(str(exc).splitlines()[0], source, line) from None

    def error(self, section, key, message):
        line = self.lines.get((section, key)) or self.lines.get((section, None))
        label = section if key is None else f"[{section}] {key}"
        return ConfigError(f"{label}: {message}", self.source, line)

    def typed(self, section, schema) -> dict:
        if not self.cp.has_section(section):
            return {}
        out = {}
        for key, raw in self.cp.items(section):
            if key not in schema:
                raise self.error(section, key, f"unknown key (expected one of {', '.join(schema)})")
            out[key] = self.convert(section, key, raw, schema[key])
        return out

    def convert(self, section, key, raw, kind):
        try:
            return kind(raw)
        except ValueError:
            raise self.error(section, key, f"expected {kind.__name__}, got {raw!r}") from None


def _membership(reader, section, key, raw):
    parts = raw.split()
    if not parts or parts[0] not in ("triangular", "trapezoidal"):
        raise reader.error(section, key, "expected 'triangular a b c' or 'trapezoidal a b c d'")
    want = 3 if parts[0] == "triangular" else 4
    if len(parts) != want + 1:
        raise reader.error(section, key, f"{parts[0]} needs {want} breakpoints")
    points = tuple(reader.convert(section, key, p, float) for p in parts[1:])
    return parts[0], points


def _fuzzy_sets(reader):
    sets = {}
    for section in reader.cp.sections():
        if not section.startswith("fuzzy."):
            continue
        name = section[len("fuzzy."):]
        if name not in rulebases.DEFAULT_SETS:
            raise reader.error(section, None, f"unknown fuzzy variable {name!r}")
        universe, defaults = rulebases.DEFAULT_SETS[name]
        labels = []
        for key, raw in reader.cp.items(section):
            if key == "universe":
                bounds = raw.split()
                if len(bounds) != 2:
                    raise reader.error(section, key, "expected 'lo hi'")
                universe = tuple(reader.convert(section, key, b, float) for b in bounds)
            else:
                labels.append((key, _membership(reader, section, key, raw)))
        sets[name] = (universe, tuple(labels) or defaults)
    return sets


def _rule_table(reader, name, default):
    section = f"rules.{name}"
    if not reader.cp.has_section(section):
        return default
    arity = _RULEBASES[name]
    table = {tuple(row[:arity]): row[arity] for row in default}
    for key, raw in reader.cp.items(section):
        antecedents = tuple(key.split("."))
        if len(antecedents) != arity:
            raise reader.error(section, key, f"expected {arity} dot-separated input labels")
        table[antecedents] = raw.strip()
    return tuple((*k, v) for k, v in table.items())


def _centroids(reader, name, default):
    section = f"centroids.{name}"
    if not reader.cp.has_section(section):
        return default
    values = dict(default)
    for key, raw in reader.cp.items(section):
        if key not in values:
            raise reader.error(section, key, f"unknown output label (expected one of {', '.join(values)})")
        values[key] = reader.convert(section, key, raw, float)
    return tuple(values.items())


def parse_config(text: str, source: str = "<config>", base: SimConfig | None = None) -> SimConfig:
    reader = _Reader(text, source)
    known = {"simulation", "radio", "network", "leach", "edeec"}
    for section in reader.cp.sections():
        prefix = section.split(".", 1)[0]
        tail = section.split(".", 1)[1] if "." in section else ""
        ok = section in known or prefix == "fuzzy" or (
            prefix in ("rules", "centroids") and tail in _RULEBASES)
        if not ok:
            raise reader.error(section, None, "unknown section")

    cfg = base or SimConfig()
    sim = reader.typed("simulation", _SIMULATION)
    bs = BaseStation(sim.pop("bs_x", cfg.bs.x), sim.pop("bs_y", cfg.bs.y))

    radio = {}
    for key, raw in reader.typed("radio", {k: str for k in _RADIO}).items():
        field, exp = _RADIO[key]
        if exp is None:
            radio[field] = reader.convert("radio", key, raw, int)
        else:
            reader.convert("radio", key, raw, float)
            # scale in decimal so 0.0013 pJ lands exactly on 1.3e-15
            radio[field] = float(Decimal(raw.strip()).scaleb(exp))

    leach = reader.typed("leach", _LEACH)
    edeec = reader.typed("edeec", _EDEEC)
    r_est = edeec.get("r_estimate", cfg.edeec_r_estimate)
    if isinstance(r_est, str) and r_est != "auto":
        r_est = reader.convert("edeec", "r_estimate", r_est, float)

    sections = {
        "radio": lambda: replace(cfg.radio, **radio),
        "network": lambda: replace(cfg.network, **reader.typed("network", _NETWORK)),
    }
    parts = {}
    for section, build in sections.items():
        try:
            parts[section] = build()
        except (TypeError, ValueError) as exc:
            raise reader.error(section, None, str(exc)) from None

    cfg = replace(
        cfg,
        **sim,
        bs=bs,
        radio=parts["radio"],
        network=parts["network"],
        leach_p=leach.get("p_opt", cfg.leach_p),
        edeec_p=edeec.get("p_opt", cfg.edeec_p),
        edeec_r_estimate=r_est,
        edeec_normalization=edeec.get("normalization", cfg.edeec_normalization),
        edeec_a=edeec.get("a", cfg.edeec_a),
        edeec_b=edeec.get("b", cfg.edeec_b),
        fuzzy_sets={**cfg.fuzzy_sets, **_fuzzy_sets(reader)},
        election_table=_rule_table(reader, "election", cfg.election_table),
        relay_table=_rule_table(reader, "relay", cfg.relay_table),
        election_centroids=_centroids(reader, "election", cfg.election_centroids),
        relay_centroids=_centroids(reader, "relay", cfg.relay_centroids),
    )
    _check(reader, cfg)
    return cfg


def _check(reader, cfg: SimConfig):
    """Validate the assembled config, blaming the most likely section."""
    probes = (
        ("rules.election", cfg.election_base),
        ("rules.relay", cfg.relay_base),
        ("edeec", cfg.edeec_params),
        ("simulation", cfg.validate),
    )
    for section, probe in probes:
        try:
            probe()
        except (FuzzyConfigError, ValueError) as exc:
            if not reader.cp.has_section(section):
                fuzzy = [s for s in reader.cp.sections() if s.startswith(("fuzzy.", "centroids."))]
                section = fuzzy[0] if fuzzy else section
            raise reader.error(section, None, str(exc)) from None


def load_config(path, base: SimConfig | None = None) -> SimConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc.strerror or exc}", str(path)) from None
    return parse_config(text, str(path), base)


def paper_config_path() -> Path:
    return Path(str(resources.files("fuzzywsn") / "data" / PAPER_CONFIG))


def paper_config() -> SimConfig:
    return load_config(paper_config_path())
