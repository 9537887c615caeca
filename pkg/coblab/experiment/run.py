"""Run experiments from a config file: used by the CLI."""

from __future__ import annotations

from itertools import combinations
from pathlib import Path
from typing import Any, Literal

import numpy as np
import yaml
from jinja2 import Environment
from pydantic import BaseModel

from coblab.arithmetic.frac import Frac128, parse_angle
from coblab.arithmetic.subsequence import select_subsequence
from coblab.experiment.config import ExperimentConfig
from coblab.fourier.chain import (
    CoboundaryChain,
    build_chain,
    cesaro_at_zero,
    chains_from_json,
    chains_to_json,
    l2_tail_bounds,
    sup_growth_probe,
    uniform_tail_bound,
    within_l2_bounds,
)
from coblab.fourier.series import ZERO_SERIES, abs_coeff_sum, halton_points, l2_norm
from coblab.rpk.finite import FiniteSystem, rp_bruteforce_finite
from coblab.rpk.torus import RPCertificate, results_to_json, rp_certify_torus, rp_product_project
from coblab.systems.builders import (
    build_combined,
    build_lemma31_T,
    build_R,
    build_S,
    build_Sprime,
    build_two_coboundary,
    build_zd_family,
)
from coblab.systems.conjugacy import (
    PiMap,
    pi_for_combined,
    pi_for_lemma31,
    pi_for_R,
    pi_for_two_coboundary,
)
from coblab.systems.spec import SkewSpec, TorusPoint
from coblab.utils import SCHEMA_VERSION, logger, read_json, write_csv, write_json
from coblab.verify.birkhoff import CSV_HEADER, Character, unique_ergodicity_probe
from coblab.verify.residuals import (
    IDENTITY_THRESHOLD,
    coboundary_residual,
    commutation_residual,
    conjugacy_residual,
    eigenfunction_residual,
)

NEGATIVE_CONTROL_FLOOR = 1e-2
UNIFORM_SAMPLES = 1000

REPORT_TEMPLATE = """\
# {{ report.name }}: {{ report.system }}

{% if report.checks -%}
| check | kind | value | threshold | status |
|---|---|---|---|---|
{% for c in report.checks -%}
| {{ c.name }} | {{ c.kind }} | {{ "%.3e"|format(c.value) }} | {{ "-" if c.threshold is none else "%.3e"|format(c.threshold) }} | {{ "ok" if c.passed else "FAIL" }} |
{% endfor %}
{%- else -%}
No checks selected.
{% endif %}
{% if report.ergodicity %}
## Birkhoff averages at N = {{ report.ergodicity.checkpoints[-1] }}

| char | spread | max abs |
|---|---|---|
{% for s in report.ergodicity.summaries -%}
| {{ s.char|join(",") }} | {{ "%.3e"|format(s.spread) }} | {{ "%.3e"|format(s.max_abs) }} |
{% endfor %}
{% endif %}
{% if certificates %}
## Regional proximality

{% for r in certificates.results -%}
- ({{ r.x|join(", ") }}) ~ ({{ r.y|join(", ") }}) at delta={{ r.delta }}: \
{% if r.kind == "certificate" %}certified with n={{ r.n|list }}{% else %}no witness found{% if r.impossibility %} ({{ r.impossibility }}){% endif %}{% endif %}
{% endfor %}
{% if certificates.finite %}
Finite system of size {{ certificates.finite.size }}: {{ certificates.finite.pairs|length }} related pairs at delta={{ certificates.finite.delta }}.
{% endif %}
{% endif %}
"""


class Check(BaseModel):
    """One verified property; identity checks gate the exit code."""

    name: str
    kind: Literal["identity", "measured"]
    value: float
    threshold: float | None = None
    passed: bool

    def __str__(self) -> str:
        status = "ok" if self.passed else "FAIL"
        bound = "" if self.threshold is None else f" (threshold {self.threshold:.1e})"
        return f"[{status}] {self.kind} {self.name}: {self.value:.3e}{bound}"


def _resolve_path(config_path: str | Path) -> Path:
    path = Path(config_path).expanduser().resolve()
    if not path.is_file():
        raise FileNotFoundError(f"Config file not found: {path}")
    return path


def _identity(name: str, value: float) -> Check:
    return Check(name=name, kind="identity", value=value, threshold=IDENTITY_THRESHOLD, passed=value < IDENTITY_THRESHOLD)


class Experiment:
    """Builds, verifies and certifies the system selected by an ExperimentConfig."""

    def __init__(self, config: ExperimentConfig, out_dir: str | Path | None = None):
        self.config = config
        self.out_dir = Path(out_dir or config.output).expanduser()
        self.checks: list[Check] = []

    # =========================================================================
    # BUILD
    # =========================================================================

    def _chain_over(self, alpha: Frac128) -> CoboundaryChain:
        c = self.config.chain
        subseq = select_subsequence(alpha, c.eps, c.count, c.n_max)
        return build_chain(subseq, alpha, c.L)

    def build_chains(self) -> list[CoboundaryChain]:
        """One chain over alpha; ``combined`` adds a second chain over beta."""
        chains = [self._chain_over(self.config.alpha_value)]
        if self.config.system.kind == "combined":
            chains.append(self._chain_over(self.config.beta_value))
        return chains

    def build_specs(self, chains: list[CoboundaryChain]) -> list[SkewSpec]:
        s = self.config.system
        alpha, beta = self.config.alpha_value, self.config.beta_value
        f = chains[0].f
        match s.kind:
            case "S":
                return [build_S(s.k, alpha=alpha)]
            case "lemma31-T":
                return [build_lemma31_T(s.k, s.j, f, alpha=alpha)]
            case "R":
                return [build_R(s.k + 1, f, alpha=alpha, beta=beta)]
            case "two-cob":
                return [build_two_coboundary(s.k + 1, s.l, f, alpha=alpha, beta=beta)]
            case "combined":
                return [build_combined(s.k, s.j, s.l, chains[1].f, f, alpha1=alpha, alpha2=beta)]
            case "zd-family":
                base = build_lemma31_T(s.k, s.j, f, alpha=alpha)
                return build_zd_family(base, [parse_angle(c) for c in s.constants], s.placement)
        raise ValueError(f"unknown system kind {s.kind}")

    def conjugacy(self, chains: list[CoboundaryChain]) -> tuple[SkewSpec, SkewSpec, PiMap] | None:
        """``(T, S, pi)`` with ``pi o T = S o pi`` at the truncation, or None for S."""
        s = self.config.system
        alpha, beta = self.config.alpha_value, self.config.beta_value
        chain = chains[0]
        match s.kind:
            case "lemma31-T" | "zd-family":
                spec = build_lemma31_T(s.k, s.j, chain.f, alpha=alpha)
                return spec, build_S(s.k, alpha=alpha), pi_for_lemma31(s.k, s.j, chain)
            case "R":
                spec = build_R(s.k + 1, chain.f, alpha=alpha, beta=beta)
                return spec, build_Sprime(s.k + 1, alpha=alpha, beta=beta), pi_for_R(s.k + 1, chain)
            case "two-cob":
                spec = build_two_coboundary(s.k + 1, s.l, chain.f, alpha=alpha, beta=beta)
                target = build_two_coboundary(s.k + 1, s.l, None, alpha=alpha, beta=beta)
                return spec, target, pi_for_two_coboundary(s.k + 1, s.l, chain)
            case "combined":
                spec = build_combined(s.k, s.j, s.l, chains[1].f, chain.f, alpha1=alpha, alpha2=beta)
                target = build_combined(s.k, s.j, s.l, None, None, alpha1=alpha, alpha2=beta)
                return spec, target, pi_for_combined(s.k, s.j, s.l, chains[1], chain)
        return None

    def build(self) -> list[dict[str, Any]]:
        """Write subsequence.json, chains.json and spec.json; return one summary row per chain."""
        logger.info(f"Building {self.config.system.kind} system '{self.config.name}'")
        chains = self.build_chains()
        specs = self.build_specs(chains)

        write_json(
            self.out_dir / "subsequence.json",
            {"schema": SCHEMA_VERSION, "subsequences": [c.subseq.to_json() for c in chains]},
        )
        write_json(self.out_dir / "chains.json", chains_to_json(chains))
        write_json(
            self.out_dir / "spec.json",
            {"schema": SCHEMA_VERSION, "system": self.config.system.kind, "specs": [s.to_json() for s in specs]},
        )

        summary = []
        for chain in chains:
            summary.append(
                {
                    "alpha": float(chain.alpha),
                    "r0": chain.subseq.r0,
                    "eps": chain.eps,
                    "entries": len(chain.subseq),
                    "abs_sum_f": abs_coeff_sum(chain.f),
                    "l2_G": [l2_norm(g) for g in chain.G],
                    "coefficient_residual": chain.coefficient_residual(),
                }
            )
        logger.info(f"Wrote {len(chains)} chain(s) and {len(specs)} spec(s) to {self.out_dir}")
        return summary

    def load(self) -> tuple[list[CoboundaryChain], list[SkewSpec]]:
        chains = chains_from_json(read_json(self.out_dir / "chains.json"))
        data = read_json(self.out_dir / "spec.json")
        if data.get("schema") != SCHEMA_VERSION:
            raise ValueError(f"unsupported spec schema: {data.get('schema')!r}")
        return chains, [SkewSpec.from_json(s) for s in data["specs"]]

    # =========================================================================
    # VERIFY
    # =========================================================================

    def verify(self) -> list[Check]:
        """Run the selected probes on the built artifacts and write report.json plus CSV data."""
        v = self.config.verify
        chains, specs = self.load()
        self.checks = []
        report: dict[str, Any] = {
            "schema": SCHEMA_VERSION,
            "name": self.config.name,
            "system": self.config.system.kind,
        }

        if v.coboundary:
            for i, chain in enumerate(chains):
                self.checks.append(_identity(f"chain{i}.coefficients", chain.coefficient_residual()))
                self.checks.append(_identity(f"chain{i}.coboundary", coboundary_residual(chain, v.samples)))

        if v.conjugacy:
            triple = self.conjugacy(chains)
            if triple is not None:
                spec, target, pi = triple
                self.checks.append(_identity("conjugacy", conjugacy_residual(spec, target, pi, v.samples)))

        if v.l2:
            for i, chain in enumerate(chains):
                for level, (lower, upper) in enumerate(l2_tail_bounds(chain), start=1):
                    value = l2_norm(chain.G[level - 1]) ** 2
                    self.checks.append(
                        Check(
                            name=f"chain{i}.G{level}.l2",
                            kind="measured",
                            value=value,
                            threshold=upper,
                            passed=within_l2_bounds(value, lower, upper),
                        )
                    )

        if v.uniform_cauchy:
            M, M2 = v.uniform_cauchy
            chain = chains[0]
            xs = [h[0] for h in halton_points(min(v.samples, UNIFORM_SAMPLES))]
            gap = chain.truncated(M2).f.evaluate_many(xs) - chain.truncated(M).f.evaluate_many(xs)
            bound = uniform_tail_bound(chain, M)
            value = float(np.max(np.abs(gap)))
            self.checks.append(
                Check(name=f"f.uniform_cauchy[{M},{M2}]", kind="measured", value=value, threshold=bound, passed=value <= bound)
            )

        if v.eigenfunction:
            coordinate = 1 if self.config.system.kind == "R" else self.config.system.k
            F = chains[0].G[0]
            beta = self.config.beta_value
            for n, m in v.eigenfunction:
                value = eigenfunction_residual(specs[0], n, m, F, beta, v.samples, coordinate)
                self.checks.append(_identity(f"eigenfunction[{n},{m}]", value))
                if m != 0:
                    control = eigenfunction_residual(specs[0], n, m, ZERO_SERIES, beta, v.samples, coordinate)
                    self.checks.append(
                        Check(
                            name=f"eigenfunction[{n},{m}].without_F",
                            kind="measured",
                            value=control,
                            threshold=NEGATIVE_CONTROL_FLOOR,
                            passed=control >= NEGATIVE_CONTROL_FLOOR,
                        )
                    )

        if v.commutation and len(specs) > 1:
            exact = self.config.system.placement == "last" or specs[0].series_coordinates()[0] == specs[0].dim - 1
            for (a, spec_a), (b, spec_b) in combinations(enumerate(specs), 2):
                value = commutation_residual(spec_a, spec_b, v.samples)
                name = f"commutation[{a},{b}]"
                if exact:
                    self.checks.append(_identity(name, value))
                else:
                    self.checks.append(Check(name=name, kind="measured", value=value, passed=True))

        if v.sup_growth:
            rows = sup_growth_probe(chains[0], v.sup_growth)
            write_csv(self.out_dir / "sup_growth.csv", ["M", "value"], rows)
            report["sup_growth"] = [list(r) for r in rows]

        if v.cesaro:
            rows = [(N, cesaro_at_zero(chains[0], N)) for N in v.cesaro]
            write_csv(self.out_dir / "cesaro.csv", ["N", "value"], rows)
            report["cesaro"] = [list(r) for r in rows]
            values = [value for _, value in rows]
            self.checks.append(
                Check(
                    name="cesaro.nondecreasing",
                    kind="measured",
                    value=min((b - a for a, b in zip(values, values[1:])), default=0.0),
                    threshold=0.0,
                    passed=all(b >= a for a, b in zip(values, values[1:])),
                )
            )

        if v.birkhoff:
            b = v.birkhoff
            spec = specs[0]
            if isinstance(b.starts, int):
                starts = [TorusPoint(tuple(c.raw for c in h)) for h in halton_points(b.starts, spec.dim)]
            else:
                starts = [TorusPoint.of(*p) for p in b.starts]
            ergodicity = unique_ergodicity_probe(
                spec, [Character(tuple(m)) for m in b.characters], starts, b.checkpoints, self.config.name
            )
            write_csv(self.out_dir / "birkhoff.csv", CSV_HEADER, ergodicity.csv_rows())
            report["ergodicity"] = ergodicity.model_dump(mode="json", exclude={"records"})
            for s in ergodicity.summaries:
                key = ",".join(map(str, s.char))
                if any(s.char):
                    self.checks.append(
                        Check(
                            name=f"birkhoff[{key}].max_abs",
                            kind="measured",
                            value=s.max_abs,
                            threshold=b.max_abs,
                            passed=s.max_abs <= b.max_abs,
                        )
                    )
                self.checks.append(
                    Check(
                        name=f"birkhoff[{key}].spread",
                        kind="measured",
                        value=s.spread,
                        threshold=b.spread,
                        passed=s.spread <= b.spread,
                    )
                )

        report["checks"] = [c.model_dump() for c in self.checks]
        write_json(self.out_dir / "report.json", report)
        for check in self.checks:
            log = logger.info if check.passed else logger.warning
            log(str(check))
        return self.checks

    @property
    def failed(self) -> list[Check]:
        return [c for c in self.checks if c.kind == "identity" and not c.passed]

    # =========================================================================
    # RPK
    # =========================================================================

    def certify(self) -> dict[str, Any]:
        """Certify the configured pairs on the built system and write certificates.json."""
        r = self.config.rpk
        _, specs = self.load()
        spec = specs[0]
        results = []
        projections: list[RPCertificate] = []
        for pair in r.pairs:
            x, y = TorusPoint.of(*pair.x), TorusPoint.of(*pair.y)
            result = rp_certify_torus(spec, (x, y), r.k, r.delta, r.n_bound, r.grid)
            logger.info(f"{pair.x} ~ {pair.y}: {result.kind}")
            results.append(result)
            if r.project and isinstance(result, RPCertificate):
                projections.extend(rp_product_project(spec, result))

        data = results_to_json(results)
        data["system"] = self.config.system.kind
        data["projections"] = [p.model_dump(mode="json") for p in projections]
        data["finite"] = None
        if r.finite:
            f = r.finite
            system = FiniteSystem.from_json(f.path) if f.path else FiniteSystem.cyclic_rotation(f.size, f.shift)
            pairs = sorted(rp_bruteforce_finite(system, f.k, f.delta, f.n_bound))
            data["finite"] = {
                "size": system.size,
                "k": f.k,
                "delta": f.delta,
                "n_bound": f.n_bound,
                "pairs": [list(p) for p in pairs],
            }
        write_json(self.out_dir / "certificates.json", data)
        return data

    # =========================================================================
    # REPORT
    # =========================================================================

    def render_report(self) -> Path:
        return render_report(self.out_dir)


def render_report(out_dir: str | Path) -> Path:
    """Render report.md from report.json and, when present, certificates.json."""
    out_dir = Path(out_dir).expanduser()
    report = read_json(out_dir / "report.json")
    certs_path = out_dir / "certificates.json"
    certificates = read_json(certs_path) if certs_path.is_file() else None
    text = Environment(autoescape=False, keep_trailing_newline=True).from_string(REPORT_TEMPLATE).render(
        report=report, certificates=certificates
    )
    path = out_dir / "report.md"
    path.write_text(text)
    logger.debug(f"wrote {path}")
    return path


class ExperimentBuilder:
    """Fluent builder: load config from dict, YAML/JSON file, or YAML string."""

    def __init__(self):
        self._config: ExperimentConfig | None = None
        self._out_dir: Path | None = None

    def from_dict(self, config_dict: dict) -> "ExperimentBuilder":
        self._config = ExperimentConfig(**config_dict)
        return self

    def from_file(self, path: str | Path) -> "ExperimentBuilder":
        # YAML is a superset of JSON, so both formats load here
        path = _resolve_path(path)
        data = yaml.safe_load(path.read_text())
        if not isinstance(data, dict):
            raise ValueError(f"Config file is empty or not a mapping: {path}")
        return self.from_dict(data)

    def from_string(self, text: str) -> "ExperimentBuilder":
        data = yaml.safe_load(text)
        if not isinstance(data, dict):
            raise ValueError("Config input is empty or not a mapping")
        return self.from_dict(data)

    def with_output(self, out_dir: str | Path | None) -> "ExperimentBuilder":
        self._out_dir = Path(out_dir) if out_dir is not None else None
        return self

    def build(self) -> Experiment:
        if self._config is None:
            raise ValueError("Configuration not set. Call from_dict/from_file first.")
        return Experiment(self._config, self._out_dir)

