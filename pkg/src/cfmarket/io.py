"""Run configuration, CSV emission and reproducible-run manifests.

Config files are flat ``key = value`` lines with '#' comments.  Floats
are written with 17 significant digits everywhere, so a config or a CSV
round-trips losslessly and diffs are exact across platforms.
"""

from __future__ import annotations

import dataclasses
import os
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .herding import PopulationDistribution
from .params import HerdingParams, ModelParams, SoiParams
from .simulate import PriceSeries

OUTPUT_ROOT_ENV = "CFMARKET_OUT"

FLOAT_FMT = "%.17g"


def default_output_root() -> Path:
    return Path(os.environ.get(OUTPUT_ROOT_ENV, "runs"))


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return FLOAT_FMT % v
    if v is None:
        return ""
    return str(v)


@dataclass
class RunConfig:
    """Flat, file-round-trippable bundle of every knob of a run."""

    # model
    b: float = 1.0
    gamma: float = 0.006
    sigma: float = 1.0
    M: int = 20
    N: int = 500
    p_f: float = 0.0
    sigma_pf: float = 0.0
    dynamics_mode: str = "linear"
    ed_normalization: str = "by_price"
    # herding
    herd_base_rate: float = 0.5
    herd_epsilon: float = 0.002
    herd_bias: float = 1.02
    # soi
    soi_enabled: bool = False
    soi_T_window: int = 100
    soi_theta_in: float = 2.0
    soi_theta_out: float = 1.0
    soi_n_min: int = 10
    soi_n_max: int = 800
    soi_update_period: int = 10
    # run
    seed: int = 1
    stream: int = 0
    t_max: int = 1_000_000
    warmup: int = -1  # -1 = model default
    x0: float = 0.5
    p0: float | None = None
    freeze_x: bool = False
    delta: int = 100
    out_dir: str = ""

    def to_params(self) -> ModelParams:
        herding = HerdingParams(
            base_rate=self.herd_base_rate,
            epsilon=self.herd_epsilon,
            bias=self.herd_bias,
        )
        soi = None
        if self.soi_enabled:
            soi = SoiParams(
                T_window=self.soi_T_window,
                theta_in=self.soi_theta_in,
                theta_out=self.soi_theta_out,
                n_min=self.soi_n_min,
                n_max=self.soi_n_max,
                update_period=self.soi_update_period,
            )
        return ModelParams(
            b=self.b,
            gamma=self.gamma,
            sigma=self.sigma,
            M=self.M,
            N=self.N,
            p_f=self.p_f,
            sigma_pf=self.sigma_pf,
            dynamics_mode=self.dynamics_mode,
            ed_normalization=self.ed_normalization,
            herding=herding,
            soi=soi,
        )

    @property
    def warmup_steps(self) -> int | None:
        return None if self.warmup < 0 else self.warmup

    def items(self) -> list[tuple[str, str]]:
        return [
            (f.name, _fmt(getattr(self, f.name)))
            for f in dataclasses.fields(self)
        ]

    def write(self, path: str | Path) -> None:
        lines = [f"{k} = {v}" for k, v in self.items()]
        Path(path).write_text("\n".join(lines) + "\n")

    @classmethod
    def read(cls, path: str | Path) -> "RunConfig":
        cfg = cls()
        for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected 'key = value'")
            key, value = (s.strip() for s in line.split("=", 1))
            cfg.set_key(key, value, where=f"{path}:{lineno}")
        return cfg

    def set_key(self, key: str, value: str, where: str = "override") -> None:
        fields = {f.name: f for f in dataclasses.fields(self)}
        if key not in fields:
            raise ValueError(f"{where}: unknown config field {key!r}")
        current = getattr(self, key)
        ftype = fields[key].type
        try:
            if key == "p0":
                parsed = None if value == "" else float(value)
            elif isinstance(current, bool) or ftype == "bool":
                if value.lower() not in ("true", "false"):
                    raise ValueError("expected true/false")
                parsed = value.lower() == "true"
            elif isinstance(current, int) and not isinstance(current, bool):
                parsed = int(value)
            elif isinstance(current, float):
                parsed = float(value)
            else:
                parsed = value
        except ValueError as exc:
            raise ValueError(f"{where}: field {key!r}: {exc}") from exc
        setattr(self, key, parsed)


def write_manifest(config: RunConfig, path: str | Path, **extra) -> None:
    """Flat key-value sidecar from which the run is fully reproducible."""
    lines = [f"{k} = {v}" for k, v in config.items()]
    lines += [f"{k} = {_fmt(v)}" for k, v in extra.items()]
    Path(path).write_text("\n".join(lines) + "\n")


def read_key_value(path: str | Path) -> dict[str, str]:
    out = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            k, v = (s.strip() for s in line.split("=", 1))
            out[k] = v
    return out


def write_series_csv(series: PriceSeries, path: str | Path) -> None:
    """Columns t, p, x, N, p_f (+ ed in multiplicative mode)."""
    cols = [series.t, series.p, series.x, series.n, series.p_f]
    header = "t,p,x,N,p_f"
    fmts = ["%d", FLOAT_FMT, FLOAT_FMT, "%d", FLOAT_FMT]
    if series.ed is not None:
        cols.append(series.ed)
        header += ",ed"
        fmts.append(FLOAT_FMT)
    data = np.column_stack(cols)
    np.savetxt(path, data, fmt=fmts, delimiter=",", header=header, comments="")


def read_series_csv(path: str | Path) -> dict[str, np.ndarray]:
    data = np.genfromtxt(path, delimiter=",", names=True)
    return {name: np.asarray(data[name]) for name in data.dtype.names}


def write_feq_csv(feq: PopulationDistribution, path: str | Path) -> None:
    data = np.column_stack([feq.edges[:-1], feq.edges[1:], feq.mass])
    np.savetxt(
        path,
        data,
        fmt=FLOAT_FMT,
        delimiter=",",
        header="bin_left,bin_right,mass",
        comments="",
    )


def write_curve_csv(
    path: str | Path, header: str, *columns: np.ndarray
) -> None:
    np.savetxt(
        path,
        np.column_stack(columns),
        fmt=FLOAT_FMT,
        delimiter=",",
        header=header,
        comments="",
    )


def write_report(path: str | Path, entries: dict) -> None:
    lines = [f"{k} = {_fmt(v)}" for k, v in entries.items()]
    Path(path).write_text("\n".join(lines) + "\n")
