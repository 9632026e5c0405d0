"""Pydantic configuration models with env var support."""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, Field, model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from phnet.config import defaults


class IntegratorConfig(BaseModel):
    """Time-integration settings for one simulation run."""

    model_config = {"extra": "forbid"}

    method: Literal["rk4_fixed", "dp45_adaptive"] = defaults.DEFAULT_METHOD
    step: float = Field(defaults.DEFAULT_RK4_STEP, gt=0)
    rel_tol: float = Field(defaults.DEFAULT_REL_TOL, gt=0, le=1e-2)
    abs_tol: float = Field(defaults.DEFAULT_ABS_TOL, gt=0, le=1e-2)
    max_step: float = Field(defaults.DEFAULT_MAX_STEP, gt=0)
    t_end: float = Field(defaults.DEFAULT_T_END, gt=0)
    record_stride: int = Field(1, ge=1)

    @model_validator(mode="after")
    def _step_within_horizon(self) -> IntegratorConfig:
        if self.method == "rk4_fixed" and self.step > self.t_end:
            raise ValueError("rk4 step exceeds t_end")
        return self


class FeasibilityConfig(BaseModel):
    tol: float = Field(defaults.FEASIBILITY_TOL, gt=0)
    max_iterations: int = Field(defaults.NEWTON_MAX_ITER, ge=1)
    shrink: float = Field(defaults.DOMAIN_SHRINK, gt=0, lt=1)


class MonitorConfig(BaseModel):
    settle_tol: float = Field(defaults.SETTLE_TOL, gt=0)
    settle_window: float = Field(defaults.SETTLE_WINDOW, ge=0)
    monotone_slack: float = Field(defaults.MONOTONE_SLACK, ge=0)


class ProbeConfig(BaseModel):
    workers: int = Field(1, ge=1)
    show_progress: bool = True


class OutputConfig(BaseModel):
    directory: str = defaults.DEFAULT_OUTPUT_DIR
    float_format: str = defaults.CSV_FLOAT_FORMAT
    timing: bool = True


class LoggingConfig(BaseModel):
    level: str = "INFO"
    json_output: bool = False


class PhnetConfig(BaseSettings):
    """Toolkit-wide configuration; ``PHNET_<SECTION>__<KEY>`` env vars override."""

    model_config = SettingsConfigDict(env_prefix="PHNET_", env_nested_delimiter="__")

    integrator: IntegratorConfig = Field(default_factory=IntegratorConfig)
    feasibility: FeasibilityConfig = Field(default_factory=FeasibilityConfig)
    monitors: MonitorConfig = Field(default_factory=MonitorConfig)
    probe: ProbeConfig = Field(default_factory=ProbeConfig)
    output: OutputConfig = Field(default_factory=OutputConfig)
    logging: LoggingConfig = Field(default_factory=LoggingConfig)
