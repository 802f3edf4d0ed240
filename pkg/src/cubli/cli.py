"""Command-line front end: config-driven experiments and the verification suite.

Commands: params, simulate, gains, verify, fit-friction.  Configuration is a
flat key = value text file with dotted key paths; every key can also be
overridden on the command line with --set key=value.  Angles in the config are
degrees; everything internal is radians.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import sys

import numpy as np

from . import analysis, control, plant, rotor, sim
from .control import ControllerConfig, DesignSpec, Mode
from .errors import (
    CubliError,
    DivergenceError,
    IdentificationError,
    SingularityError,
    ValidationError,
)
from .plant import CubliParams, Fidelity, FrictionParams, GravityModel

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_SIMULATION = 3
EXIT_VERIFICATION = 4

CSV_HEADER = "t,q0,q1,theta_c_deg,theta_w,omega_c,omega_w,u,tau_cmd,tau_applied,tau_f,energy"


# ---------------------------------------------------------------------------
# configuration


def _parse_float(key, raw):
    try:
        return float(raw)
    except ValueError:
        raise ValidationError(f"{key}: not a number: {raw!r}") from None


def _positive(key, raw):
    value = _parse_float(key, raw)
    if not value > 0.0:
        raise ValidationError(f"{key}: must be strictly positive, got {value!r}")
    return value


def _nonnegative(key, raw):
    value = _parse_float(key, raw)
    if value < 0.0:
        raise ValidationError(f"{key}: must be nonnegative, got {value!r}")
    return value


def _plain_float(key, raw):
    return _parse_float(key, raw)


def _zeta(key, raw):
    value = _parse_float(key, raw)
    if not 0.0 < value <= 1.0:
        raise ValidationError(f"{key}: must be in (0, 1], got {value!r}")
    return value


def _enum(enum_cls):
    def parse(key, raw):
        try:
            return enum_cls(raw.strip())
        except ValueError:
            options = ", ".join(e.value for e in enum_cls)
            raise ValidationError(f"{key}: unknown value {raw!r} (choose from: {options})") from None

    return parse


def _disturbances(key, raw):
    raw = raw.strip()
    if raw in ("", "none"):
        return ()
    pulses = []
    for item in raw.split(","):
        parts = item.strip().split(":")
        if len(parts) != 3:
            raise ValidationError(f"{key}: expected start:duration:torque, got {item.strip()!r}")
        start, duration, torque = (_parse_float(key, p) for p in parts)
        if duration <= 0.0:
            raise ValidationError(f"{key}: pulse duration must be positive, got {duration!r}")
        pulses.append(sim.Disturbance(start=start, duration=duration, torque=torque))
    return tuple(pulses)


def _string(key, raw):
    return raw.strip()


# key -> (parser, default as written in a config file)
CONFIG_SCHEMA = {
    "physics.l": (_positive, "0.15"),
    "physics.m_s": (_positive, "0.70"),
    "physics.m_w": (_positive, "0.15"),
    "physics.I_sG": (_positive, "3.75e-3"),
    "physics.I_wG": (_positive, "1.25e-4"),
    "physics.g": (_positive, "9.81"),
    "friction.tau_c": (_nonnegative, "2.46e-3"),
    "friction.b_w": (_nonnegative, "1.06e-5"),
    "friction.c_d": (_nonnegative, "1.70e-8"),
    "model.plant_gravity": (_enum(GravityModel), "consistent"),
    "model.controller_gravity": (_enum(GravityModel), "consistent"),
    "model.fidelity": (_enum(Fidelity), "exact"),
    "control.zeta": (_zeta, "0.7071067811865476"),
    "control.omega_n_factor": (_positive, "1.5"),
    "control.alpha": (_nonnegative, "0.1"),
    "control.mode": (_enum(Mode), "attitude-and-wheel"),
    "control.tau_max": (_positive, "0.5"),
    "scenario.initial_angle_deg": (_plain_float, "40.0"),
    "scenario.reference_angle_deg": (_plain_float, "45.0"),
    "scenario.dt": (_positive, "1e-3"),
    "scenario.t_end": (_positive, "20.0"),
    "scenario.sensor_bias_deg": (_plain_float, "0.0"),
    "scenario.disturbances": (_disturbances, "9.0:0.1:0.05,16.0:0.1:0.05"),
    "output.path": (_string, "cubli_run.csv"),
}


@dataclasses.dataclass
class Config:
    params: CubliParams
    friction: FrictionParams
    plant_gravity: GravityModel
    controller_gravity: GravityModel
    fidelity: Fidelity
    zeta: float
    omega_n_factor: float
    alpha: float
    mode: Mode
    tau_max: float
    initial_angle_deg: float
    reference_angle_deg: float
    dt: float
    t_end: float
    sensor_bias_deg: float
    disturbances: tuple
    output_path: str


def read_config_file(path: str) -> dict:
    """Parse a key = value config file into a raw string mapping."""
    raw = {}
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            if "=" not in stripped:
                raise ValidationError(f"{path}:{lineno}: expected key = value, got {stripped!r}")
            key, _, value = stripped.partition("=")
            raw[key.strip()] = value.strip()
    return raw


def build_config(raw: dict) -> Config:
    """Validate raw key/value strings against the schema and assemble a Config."""
    for key in raw:
        if key not in CONFIG_SCHEMA:
            raise ValidationError(f"unknown config key: {key}")
    values = {}
    for key, (parser, default) in CONFIG_SCHEMA.items():
        values[key] = parser(key, raw.get(key, default))
    return Config(
        params=CubliParams(
            l=values["physics.l"],
            m_s=values["physics.m_s"],
            m_w=values["physics.m_w"],
            I_sG=values["physics.I_sG"],
            I_wG=values["physics.I_wG"],
            g=values["physics.g"],
        ),
        friction=FrictionParams(
            tau_c=values["friction.tau_c"],
            b_w=values["friction.b_w"],
            c_d=values["friction.c_d"],
        ),
        plant_gravity=values["model.plant_gravity"],
        controller_gravity=values["model.controller_gravity"],
        fidelity=values["model.fidelity"],
        zeta=values["control.zeta"],
        omega_n_factor=values["control.omega_n_factor"],
        alpha=values["control.alpha"],
        mode=values["control.mode"],
        tau_max=values["control.tau_max"],
        initial_angle_deg=values["scenario.initial_angle_deg"],
        reference_angle_deg=values["scenario.reference_angle_deg"],
        dt=values["scenario.dt"],
        t_end=values["scenario.t_end"],
        sensor_bias_deg=values["scenario.sensor_bias_deg"],
        disturbances=values["scenario.disturbances"],
        output_path=values["output.path"],
    )


def load_config(args) -> Config:
    raw = {}
    path = args.config_file or args.config
    if path:
        raw.update(read_config_file(path))
    for item in args.set or ():
        if "=" not in item:
            raise ValidationError(f"--set expects key=value, got {item!r}")
        key, _, value = item.partition("=")
        raw[key.strip()] = value.strip()
    return build_config(raw)


def design_spec(cfg: Config) -> DesignSpec:
    """Resolve the design targets: omega_n is a multiple of the pendulum
    natural frequency under the controller's gravity model."""
    dp = plant.derive(cfg.params, cfg.friction, cfg.controller_gravity)
    return DesignSpec(zeta=cfg.zeta, omega_n=cfg.omega_n_factor * dp.omega_0, alpha=cfg.alpha)


def build_scenario(cfg: Config) -> sim.Scenario:
    return sim.Scenario(
        params=cfg.params,
        friction=cfg.friction,
        design=design_spec(cfg),
        controller=ControllerConfig(
            mode=cfg.mode,
            tau_max=cfg.tau_max,
            gravity_model=cfg.controller_gravity,
            q_r=rotor.from_angle(math.radians(cfg.reference_angle_deg)),
        ),
        initial=plant.State.from_angle(math.radians(cfg.initial_angle_deg)),
        plant_gravity=cfg.plant_gravity,
        fidelity=cfg.fidelity,
        dt=cfg.dt,
        t_end=cfg.t_end,
        sensor_bias=math.radians(cfg.sensor_bias_deg),
        disturbances=cfg.disturbances,
    )


# ---------------------------------------------------------------------------
# output helpers


def _fmt(value: float) -> str:
    return repr(float(value))


def write_csv(ts: sim.TimeSeries, path: str) -> None:
    """Write a run log with full double precision (shortest round-trip)."""
    columns = [ts.column(name) for name in sim.TimeSeries.COLUMNS]
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(CSV_HEADER + "\n")
        for row in zip(*columns):
            handle.write(",".join(_fmt(v) for v in row) + "\n")


def _print_kv(pairs):
    width = max(len(k) for k, _ in pairs)
    for key, value in pairs:
        print(f"{key:<{width}}  {value}")


# ---------------------------------------------------------------------------
# commands


def cmd_params(cfg: Config, json_out: bool = False) -> int:
    dp_con = plant.derive(cfg.params, cfg.friction, GravityModel.CONSISTENT)
    dp_lit = plant.derive(cfg.params, cfg.friction, GravityModel.PAPER_LITERAL)
    entries = [
        ("d", f"{dp_con.d:.6f} m"),
        ("m_c", f"{dp_con.m_c:.6g} kg"),
        ("I_sO", f"{dp_con.I_sO:.6e} kg m^2"),
        ("I_wO", f"{dp_con.I_wO:.6e} kg m^2"),
        ("I_cO", f"{dp_con.I_cO:.6e} kg m^2"),
        ("I_cO_bar", f"{dp_con.I_cO_bar:.6e} kg m^2"),
        ("m_c*g*d", f"{dp_con.mgd:.6f} N m"),
        ("omega_0 (consistent)", f"{dp_con.omega_0:.6f} rad/s"),
        ("omega_0 (paper-literal)", f"{dp_lit.omega_0:.6f} rad/s"),
        ("omega_1", f"{dp_con.omega_1:.6g} rad/s"),
        ("gamma", f"{dp_con.gamma:.6g}"),
        ("delta", f"{dp_con.delta:.6f} 1/s^2"),
    ]
    if json_out:
        print(json.dumps({k: v for k, v in entries}, indent=2))
    else:
        _print_kv(entries)
    return EXIT_OK


def cmd_gains(cfg: Config) -> int:
    dp = plant.derive(cfg.params, cfg.friction, cfg.controller_gravity)
    spec = design_spec(cfg)
    gains = control.gains_for_mode(cfg.mode, spec, dp)
    poles = analysis.designed_poles(spec)
    eigs = np.linalg.eigvals(analysis.closed_loop_matrix(gains, dp))
    mismatch = analysis.spectrum_mismatch(eigs, poles)
    _print_kv(
        [
            ("mode", cfg.mode.value),
            ("zeta", f"{spec.zeta:.6f}"),
            ("omega_n", f"{spec.omega_n:.6f} rad/s"),
            ("alpha", f"{spec.alpha:.6g}"),
            ("k_p", f"{gains.k_p:.6f}"),
            ("k_d", f"{gains.k_d:.6f}"),
            ("k_pw", f"{gains.k_pw:.6e}"),
            ("k_dw", f"{gains.k_dw:.6e}"),
            ("designed poles", "  ".join(f"{p:.4f}" for p in poles)),
            ("closed-loop eigenvalues", "  ".join(f"{e:.4f}" for e in np.sort_complex(eigs))),
            ("eigenvalue mismatch", f"{mismatch:.3e}"),
        ]
    )
    if mismatch >= 1e-6:
        print("eigenvalue mismatch exceeds 1e-6: FAIL")
        return EXIT_VERIFICATION
    return EXIT_OK


def cmd_simulate(cfg: Config, out_path: str | None = None) -> int:
    scenario = build_scenario(cfg)
    ts = sim.run(scenario)
    path = out_path or cfg.output_path
    write_csv(ts, path)

    ref = cfg.reference_angle_deg
    att_settle = sim.settling_time(ts.t, ts.theta_c_deg - ref, 0.5)
    peak_wheel = float(np.max(np.abs(ts.omega_w)))
    wheel_settle = sim.settling_time(ts.t, ts.omega_w, 0.02 * peak_wheel) if peak_wheel > 0 else 0.0
    final_wheel = abs(float(ts.omega_w[-1]))
    wheel_ok = final_wheel <= 0.1
    pairs = [
        ("csv", path),
        ("steps", str(len(ts.t))),
        ("attitude settling", f"{att_settle:.3f} s (within 0.5 deg of {ref:g} deg)"),
        ("wheel settling", f"{wheel_settle:.3f} s (within 2% of peak {peak_wheel:.1f} rad/s)"),
        ("peak |tau|", f"{np.max(np.abs(ts.tau_applied)):.4f} N m"),
        ("final attitude (true)", f"{ts.theta_c_deg[-1]:.4f} deg"),
    ]
    if cfg.sensor_bias_deg != 0.0:
        pairs.append(("final attitude (sensor)", f"{ts.theta_c_deg[-1] + cfg.sensor_bias_deg:.4f} deg"))
    pairs.append(("final |omega_w|", f"{final_wheel:.4f} rad/s"))
    pairs.append(("wheel velocity", "converged" if wheel_ok else "NOT converged (non-decaying)"))
    _print_kv(pairs)
    return EXIT_OK


# ---- verify ----------------------------------------------------------------


def _check_linearization_fd(cfg, dp_by_model):
    fp_smooth = FrictionParams(0.0, cfg.friction.b_w, 0.0)  # differentiable at rest
    worst = 0.0
    for model, dp in dp_by_model.items():
        a, b = plant.linearize(dp, cfg.friction, model)
        x0 = plant.State(rotor.UPRIGHT.copy()).as_array()

        def rate(x):
            return plant.dynamics_rate(x, 0.0, dp, fp_smooth, model, Fidelity.PAPER_APPROX)

        a_fd = analysis.fd_jacobian(rate, x0)
        b_fd = analysis.fd_jacobian(
            lambda tau: plant.dynamics_rate(x0, tau[0], dp, fp_smooth, model, Fidelity.PAPER_APPROX),
            np.zeros(1),
        )
        worst = max(worst, float(np.max(np.abs(a - a_fd))), float(np.max(np.abs(b - b_fd))))
    return worst < 1e-6, f"max |analytic - fd| = {worst:.3e} (tol 1e-6)"


def _check_open_loop_poles(cfg, dp_by_model):
    worst = 0.0
    for model, dp in dp_by_model.items():
        a, _ = plant.linearize(dp, cfg.friction, model)
        roots = analysis.poly_roots(analysis.char_poly(a))
        expected = np.array([0.0, 0.0, -dp.omega_1, dp.omega_0, -dp.omega_0], dtype=complex)
        worst = max(worst, analysis.spectrum_mismatch(roots, expected, cluster_tol=1e-7))
    return worst < 1e-8, f"root mismatch vs s^2 (s+w1)(s^2-w0^2) = {worst:.3e} (tol 1e-8)"


def _check_controllability(cfg, dp_by_model):
    ranks = []
    for model, dp in dp_by_model.items():
        a, b = plant.linearize(dp, cfg.friction, model)
        ranks.append(analysis.controllability_rank(a, b, tol=1e-9))
    ok = all(r == 4 for r in ranks)
    return ok, f"rank = {ranks[0]}/5"


def _check_gain_synthesis(cfg, dp_by_model):
    dp = dp_by_model[cfg.controller_gravity]
    rng = np.random.default_rng(2024)
    worst = 0.0
    for _ in range(100):
        spec = DesignSpec(
            zeta=rng.uniform(0.3, 1.0),
            omega_n=rng.uniform(2.0, 20.0),
            alpha=rng.uniform(0.0, 0.5),
        )
        coeffs = analysis.char_poly(analysis.closed_loop_matrix(control.full_gains(spec, dp), dp))
        target = analysis.design_poly(spec)
        worst = max(worst, float(np.max(np.abs(coeffs - target)) / np.max(np.abs(target))))
    return worst < 1e-9, f"coefficient error = {worst:.3e} relative (tol 1e-9, 100 specs)"


def _check_closed_loop_poles(cfg, dp_by_model):
    dp = dp_by_model[cfg.controller_gravity]
    spec = design_spec(cfg)
    gains = control.full_gains(spec, dp)
    eigs = np.linalg.eigvals(analysis.closed_loop_matrix(gains, dp))
    mismatch = analysis.spectrum_mismatch(eigs, analysis.designed_poles(spec))
    return mismatch < 1e-6, f"eigenvalue mismatch = {mismatch:.3e} (tol 1e-6)"


def _check_fbl_cancellation(cfg, dp_by_model):
    rng = np.random.default_rng(11)
    worst = 0.0
    for model, dp in dp_by_model.items():
        for _ in range(500):
            q = rotor.from_angle(rng.uniform(-np.pi, np.pi))
            x = np.array([q[0], q[1], rng.uniform(-20, 20), rng.uniform(-5, 5), rng.uniform(-300, 300)])
            u = rng.uniform(-10.0, 10.0)
            tau = control.feedback_linearize(u, q, x[4], dp, cfg.friction, model)
            rate = plant.dynamics_rate(x, tau, dp, cfg.friction, model, Fidelity.PAPER_APPROX)
            worst = max(worst, abs(float(rate[3]) - u))
    return worst < 1e-12, f"max |omega_c_dot - u| = {worst:.3e} (tol 1e-12, 1000 states)"


def _check_oracle_equivalence(cfg, dp_by_model, tamper: bool = False):
    dp = dp_by_model[cfg.plant_gravity]
    dp_oracle = dataclasses.replace(dp, mgd=dp.mgd * 1.01) if tamper else dp
    rng = np.random.default_rng(5)
    n = 20
    theta = rng.uniform(-np.pi, np.pi, n)
    xc = np.stack([np.cos(theta), np.sin(theta), rng.uniform(-5, 5, n), rng.uniform(-3, 3, n), rng.uniform(-100, 100, n)])
    xa = np.stack([theta, xc[2], xc[3], xc[4]])
    dt, steps = 1e-4, 10000
    worst = 0.0
    for k in range(steps):
        xc = sim.rk4_step(xc, 0.0, dt, dp, cfg.friction, cfg.plant_gravity, Fidelity.EXACT)
        xa = _angle_rk4(xa, 0.0, dt, dp_oracle, cfg.friction, cfg.plant_gravity)
        if (k + 1) % 1000 == 0:
            worst = max(worst, _form_deviation(xc, xa))
    suffix = " [tampered oracle gravity]" if tamper else ""
    return worst < 1e-8, f"max trajectory deviation = {worst:.3e} (tol 1e-8, 20 runs, 1 s){suffix}"


def _angle_rk4(x, tau, dt, dp, fp, model):
    k1 = plant.angle_dynamics_rate(x, tau, dp, fp, model)
    k2 = plant.angle_dynamics_rate(x + (0.5 * dt) * k1, tau, dp, fp, model)
    k3 = plant.angle_dynamics_rate(x + (0.5 * dt) * k2, tau, dp, fp, model)
    k4 = plant.angle_dynamics_rate(x + dt * k3, tau, dp, fp, model)
    return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _form_deviation(xc, xa) -> float:
    return max(
        float(np.max(np.abs(xc[0] - np.cos(xa[0])))),
        float(np.max(np.abs(xc[1] - np.sin(xa[0])))),
        float(np.max(np.abs(xc[2] - xa[1]))),
        float(np.max(np.abs(xc[3] - xa[2]))),
        float(np.max(np.abs(xc[4] - xa[3]))),
    )


def _check_energy_drift(cfg, dp_by_model):
    dp = dp_by_model[cfg.plant_gravity]
    x = plant.State.from_angle(0.0, omega_c=2.0, omega_w=50.0).as_array()
    e0 = plant.energies(x, dp)[2]
    drift = 0.0
    norm_drift = 0.0
    for k in range(100000):
        x = sim.rk4_step(x, 0.0, 1e-4, dp, plant.FRICTION_FREE, cfg.plant_gravity, Fidelity.EXACT)
        norm_drift = max(norm_drift, abs(math.hypot(x[0], x[1]) - 1.0))
        if (k + 1) % 2000 == 0:
            drift = max(drift, abs(plant.energies(x, dp)[2] - e0))
    drift = max(drift, abs(plant.energies(x, dp)[2] - e0))
    rel = drift / abs(e0)
    ok = rel < 1e-6 and norm_drift <= 1e-9
    return ok, f"relative drift = {rel:.3e} (tol 1e-6), unit-norm drift = {norm_drift:.3e} (tol 1e-9)"


def cmd_verify(cfg: Config, negative_control: bool = False) -> int:
    dp_by_model = {
        model: plant.derive(cfg.params, cfg.friction, model) for model in GravityModel
    }
    checks = [
        ("linearization_fd", _check_linearization_fd),
        ("open_loop_poles", _check_open_loop_poles),
        ("controllability_rank", _check_controllability),
        ("gain_synthesis", _check_gain_synthesis),
        ("closed_loop_poles", _check_closed_loop_poles),
        ("fbl_cancellation", _check_fbl_cancellation),
        ("oracle_equivalence", lambda c, d: _check_oracle_equivalence(c, d, tamper=negative_control)),
        ("energy_drift", _check_energy_drift),
    ]
    all_ok = True
    for name, check in checks:
        ok, metric = check(cfg, dp_by_model)
        all_ok = all_ok and ok
        print(f"{name}: {metric} {'PASS' if ok else 'FAIL'}")
    print("verification:", "PASS" if all_ok else "FAIL")
    return EXIT_OK if all_ok else EXIT_VERIFICATION


def read_steady_state_csv(path: str) -> list:
    """Parse (tau, omega_ss) rows; tolerant of a header line and comments."""
    points = []
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            if lineno == 1 and any(c.isalpha() for c in stripped):
                continue  # header
            parts = stripped.split(",")
            if len(parts) != 2:
                raise ValidationError(f"{path}:{lineno}: expected 'tau,omega_ss', got {stripped!r}")
            try:
                tau, omega = float(parts[0]), float(parts[1])
            except ValueError:
                raise ValidationError(f"{path}:{lineno}: non-numeric row {stripped!r}") from None
            points.append(sim.SteadyStatePoint(tau=tau, omega_ss=omega))
    return points


def cmd_fit_friction(cfg: Config, input_path: str | None, synthetic: bool) -> int:
    if synthetic:
        omegas = np.linspace(60.0, 600.0, 20)
        levels = [float(plant.friction_torque(w, cfg.friction)) for w in omegas]
        points = sim.steady_state_sweep(levels, cfg.params, cfg.friction)
        source = f"synthetic sweep ({len(points)} levels)"
    elif input_path:
        points = read_steady_state_csv(input_path)
        source = f"{input_path} ({len(points)} rows)"
    else:
        raise ValidationError("fit-friction needs an input CSV or --synthetic")
    fit = sim.fit_friction(points)
    fitted = fit.params
    _print_kv(
        [
            ("source", source),
            ("tau_c", f"{fitted.tau_c:.6e} N m"),
            ("b_w", f"{fitted.b_w:.6e} N m s/rad"),
            ("c_d", f"{fitted.c_d:.6e} N m s^2/rad^2"),
            ("residual rms", f"{fit.residual_rms:.3e} N m"),
            ("model at 300 rad/s", f"{plant.friction_torque(300.0, fitted):.4e} N m"),
        ]
    )
    return EXIT_OK


# ---------------------------------------------------------------------------
# entry point


def _add_common(parser):
    parser.add_argument("config_file", nargs="?", help="path to a key = value config file")
    parser.add_argument("--config", help="alternative way to pass the config file path")
    parser.add_argument("--set", action="append", metavar="KEY=VALUE", help="override a config key")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="cubli", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("params", help="print derived physical parameters")
    _add_common(p)
    p.add_argument("--json", action="store_true", help="emit JSON instead of aligned text")

    p = sub.add_parser("simulate", help="run a closed-loop scenario and write a CSV log")
    _add_common(p)
    p.add_argument("--out", help="output CSV path (overrides output.path)")
    p.add_argument("--mode", choices=[m.value for m in Mode], help="controller mode override")
    p.add_argument("--sensor-bias-deg", type=float, help="attitude sensor bias override [deg]")

    p = sub.add_parser("gains", help="print synthesized gains and verified poles")
    _add_common(p)

    p = sub.add_parser("verify", help="run the verification suite")
    _add_common(p)
    p.add_argument(
        "--negative-control",
        action="store_true",
        help="tamper the oracle gravity constant; the suite must then FAIL",
    )

    p = sub.add_parser("fit-friction", help="identify friction parameters from steady-state data")
    _add_common(p)
    p.add_argument("--input", help="CSV of tau,omega_ss rows")
    p.add_argument("--synthetic", action="store_true", help="generate the sweep by simulation first")

    args = parser.parse_args(argv)
    try:
        cfg = load_config(args)
        if args.command == "params":
            return cmd_params(cfg, json_out=args.json)
        if args.command == "simulate":
            if args.mode:
                cfg = dataclasses.replace(cfg, mode=Mode(args.mode))
            if args.sensor_bias_deg is not None:
                cfg = dataclasses.replace(cfg, sensor_bias_deg=args.sensor_bias_deg)
            return cmd_simulate(cfg, out_path=args.out)
        if args.command == "gains":
            return cmd_gains(cfg)
        if args.command == "verify":
            return cmd_verify(cfg, negative_control=args.negative_control)
        if args.command == "fit-friction":
            return cmd_fit_friction(cfg, input_path=args.input, synthetic=args.synthetic)
        raise ValidationError(f"unknown command {args.command!r}")
    except (ValidationError, IdentificationError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_VALIDATION
    except (SingularityError, DivergenceError) as err:
        print(f"simulation error: {err}", file=sys.stderr)
        return EXIT_SIMULATION
    except CubliError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
