"""Command line entry point: ``qubitflip <command> [options]``.

Exit status: 0 success, 2 usage or parse error, 3 I/O error, 4 no solution.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import calib, formats, game, optim, strategy
from .chain import ChainConfig
from .qla import HADAMARD, IDENTITY, SIGMA_X, SIGMA_Y, SIGMA_Z

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_NO_SOLUTION = 0, 2, 3, 4

GATES = {
    "i": IDENTITY,
    "x": SIGMA_X,
    "y": SIGMA_Y,
    "z": SIGMA_Z,
    "h": HADAMARD,
    "ix": 1j * SIGMA_X,
    "iy": 1j * SIGMA_Y,
    "iz": 1j * SIGMA_Z,
}


class UsageError(Exception):
    pass


def _positive(kind):
    def parse(text):
        value = kind(text)
        if not value > 0:
            raise argparse.ArgumentTypeError(f"must be positive, got {text}")
        return value

    return parse


def _chain_length(text):
    n = int(text)
    if not 1 <= n <= 7:
        raise argparse.ArgumentTypeError("chain length must be in 1..7")
    return n


def _samples(text):
    if text == "exhaustive":
        return None
    k = int(text)
    if k < 2:
        raise argparse.ArgumentTypeError("sample count must be >= 2 or 'exhaustive'")
    return k


def _out(text: str, path):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


# -- design-check -----------------------------------------------------------


def cmd_design_check(args) -> int:
    name = args.set
    if name == "pauli":
        strat = strategy.pauli_strategy()
        label = "pauli"
    elif name.startswith("haar:"):
        try:
            count = int(name[5:])
        except ValueError:
            raise UsageError(f"bad sample count in {name!r}") from None
        if count < 1:
            raise UsageError("haar sample count must be positive")
        rng = np.random.default_rng(args.seed)
        strat = strategy.MixedStrategy.uniform(strategy.haar_su2_batch(rng, count))
        label = f"haar ({count} samples, seed {args.seed})"
    else:
        raise UsageError(f"unknown set {name!r}; use 'pauli' or 'haar:N'")
    ok, dev = strategy.is_unitary_design(strat, 1, args.tol)
    print(f"set: {label}")
    print(f"max first-moment deviation: {dev:.3e}")
    print(f"unitary 1-design within tol {args.tol:g}: {'yes' if ok else 'no'}")
    return EXIT_OK if ok else 1


# -- scan-j / find-fair-j ---------------------------------------------------


def cmd_scan_j(args) -> int:
    try:
        curve = calib.scan(
            args.min, args.max, args.steps, args.n, args.T, args.scale, args.convention, args.corrected_table
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    _out(formats.curve_to_csv(curve), args.out)
    return EXIT_OK


def cmd_find_fair_j(args) -> int:
    try:
        J = calib.find_fair_coupling(
            args.n, args.T, args.tol, convention=args.convention, corrected=args.corrected_table
        )
    except calib.NoFairCouplingError as exc:
        print(f"no fair coupling: {exc}", file=sys.stderr)
        return EXIT_NO_SOLUTION
    print(f"{J:.6f}")
    return EXIT_OK


# -- optimize ---------------------------------------------------------------


def _default_coupling(J, T, corrected=False):
    if J is not None:
        return J
    try:
        return calib.find_fair_coupling(2, T, corrected=corrected)
    except calib.NoFairCouplingError as exc:
        raise UsageError(f"no fair coupling for T={T:g}; pass --J explicitly ({exc})") from None


def cmd_optimize(args) -> int:
    J = _default_coupling(args.J, args.T, args.corrected_table)
    problem = optim.OptimizationProblem(
        game.GameSpec(ChainConfig(args.n, J, args.T)),
        args.player,
        args.N,
        strategy.pauli_control_strategy(args.T, args.corrected_table),
    )
    res = optim.optimize(problem, args.restarts, args.seed)
    doc = formats.result_document(
        args.player,
        args.n,
        J,
        args.T,
        args.N,
        args.restarts,
        args.seed,
        res.best_payoff,
        problem.sequences(res.best_amplitudes),
    )
    _out(formats.dumps_result(doc), args.out)
    return EXIT_OK


# -- play -------------------------------------------------------------------


def _parse_move(text: str, allow_haar: bool):
    """A single move spec: pauli, haar, gate:NAME, euler:phi,psi,theta."""
    if text == "pauli":
        return "pauli"
    if text == "haar":
        if not allow_haar:
            raise UsageError("haar moves are only available in single mode")
        return "haar"
    if text == "zero":
        return strategy.EulerAngles(0.0, 0.0, 0.0)
    if text.startswith("gate:"):
        name = text[5:].lower()
        if name not in GATES:
            raise UsageError(f"unknown gate {name!r}; choose from {', '.join(GATES)}")
        return GATES[name]
    if text.startswith("euler:"):
        try:
            phi, psi, theta = (float(v) for v in text[6:].split(","))
        except ValueError:
            raise UsageError(f"euler move needs three numbers: {text!r}") from None
        return strategy.EulerAngles(phi, psi, theta)
    raise UsageError(f"unknown move {text!r}")


def _alice_moves(text: str, allow_haar: bool):
    parts = text.split("/")
    if len(parts) == 1:
        parts = parts * 2
    if len(parts) != 2:
        raise UsageError("alice takes one move spec or two separated by '/'")
    return [_parse_move(p, allow_haar) for p in parts]


def _named(move, name):
    return isinstance(move, str) and move == name


def _single_move(move):
    if isinstance(move, strategy.EulerAngles):
        return strategy.euler_reconstruct(move)
    return move


def _single_batch(move, samples, rng):
    if _named(move, "pauli"):
        us = np.array(strategy.pauli_strategy().elements)
        return us[rng.integers(0, 4, size=samples)]
    if _named(move, "haar"):
        return strategy.haar_su2_batch(rng, samples)
    return np.broadcast_to(_single_move(move), (samples, 2, 2))


def _report(p_alice, stderr=None):
    print(f"p_alice = {p_alice:.12f}")
    print(f"p_bob = {1.0 - p_alice:.12f}")
    if stderr is not None:
        print(f"stderr = {stderr:.3e}")


def _play_single(args) -> int:
    alice = _alice_moves(args.alice, True)
    bob = _parse_move(args.bob, True)
    moves = [alice[0], bob, alice[1]]
    print(f"single qubit | alice: {args.alice} | bob: {args.bob}")
    if args.samples is None:
        if any(_named(m, "haar") for m in moves):
            raise UsageError("haar moves need --samples K")
        mixed = [strategy.pauli_strategy() if _named(m, "pauli") else _single_move(m) for m in moves]
        spec = game.GameSpec(ChainConfig(1))
        _report(game.mean_payoff_vs_mixed(spec, (mixed[0], mixed[2]), mixed[1]))
        return EXIT_OK
    rng = np.random.default_rng(args.seed)
    batches = [_single_batch(m, args.samples, rng) for m in moves]
    psi = np.zeros((args.samples, 2), dtype=complex)
    psi[:, 0] = 1.0
    for us in batches:
        psi = np.einsum("sij,sj->si", us, psi)
    p = np.abs(psi[:, 1]) ** 2
    _report(float(p.mean()), float(p.std(ddof=1) / np.sqrt(args.samples)))
    return EXIT_OK


def _chain_move(move, T, corrected=False):
    if _named(move, "pauli"):
        return strategy.pauli_control_strategy(T, corrected)
    if isinstance(move, strategy.EulerAngles):
        return strategy.params_to_sequence(move.to_control_params(), T)
    raise UsageError("chain moves must be pauli, zero or euler:phi,psi,theta")


def _play_chain(args) -> int:
    doc, seqs = {}, []
    if args.controls:
        try:
            doc, seqs = formats.read_result_json(args.controls)
        except OSError as exc:
            print(f"cannot read {args.controls}: {exc}", file=sys.stderr)
            return EXIT_IO
        except formats.FormatError as exc:
            print(f"parse error in {args.controls}: {exc}", file=sys.stderr)
            return EXIT_USAGE
    n = args.n if args.n is not None else int(doc.get("n", 2))
    T = args.T if args.T is not None else float(doc.get("T", 1.0))
    J = args.J if args.J is not None else doc.get("J")
    corrected = args.corrected_table
    J = _default_coupling(None if J is None else float(J), T, corrected)
    config = ChainConfig(n, J, T)
    moves = [_chain_move(m, T, corrected) for m in _alice_moves(args.alice, False)]
    moves.insert(1, _chain_move(_parse_move(args.bob, False), T, corrected))
    alice_names = args.alice.split("/") * (1 if "/" in args.alice else 2)
    names = [alice_names[0], args.bob, alice_names[1]]
    player = doc.get("player")
    if player == "alice":
        if len(seqs) != 2:
            raise UsageError("alice controls need moves 1 and 2")
        moves[0], moves[2] = seqs
        names[0] = names[2] = args.controls
    elif player == "bob":
        if len(seqs) != 1:
            raise UsageError("bob controls need exactly move 1")
        moves[1] = seqs[0]
        names[1] = args.controls
    elif args.controls:
        raise UsageError("controls file must name player 'alice' or 'bob'")
    print(f"chain n={n} J={J:.6f} T={T:g} | A1: {names[0]} | B: {names[1]} | A2: {names[2]}")
    spec = game.GameSpec(config)
    if args.samples is None:
        _report(game.mean_payoff_vs_mixed(spec, (moves[0], moves[2]), moves[1]))
    else:
        rng = np.random.default_rng(args.seed)
        mean, err = game.sampled_mean_payoff(spec, (moves[0], moves[2]), moves[1], args.samples, rng)
        _report(mean, err)
    return EXIT_OK


def cmd_play(args) -> int:
    if args.mode == "demo-meyer":
        lines, res = game.meyer_demo()
        for line in lines:
            print(line)
        _report(res.p_alice)
        return EXIT_OK
    if args.mode == "single":
        return _play_single(args)
    return _play_chain(args)


# -- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qubitflip", description="Qubit flip game on a Heisenberg spin chain."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("design-check", help="check the unitary 1-design property")
    p.add_argument("--set", default="pauli", help="'pauli' or 'haar:N'")
    p.add_argument("--tol", type=_positive(float), default=1e-12)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_design_check)

    def chain_opts(p, n_default=2, T_default=1.0):
        p.add_argument("--n", type=_chain_length, default=n_default)
        p.add_argument("--T", type=_positive(float), default=T_default)
        table_opt(p)

    def table_opt(p):
        p.add_argument(
            "--corrected-table",
            action="store_true",
            help="realise i*sx with xi_3 = -pi/4 instead of the published +pi/4",
        )

    p = sub.add_parser("scan-j", help="Bob's mean payoff as a function of J (CSV)")
    p.add_argument("--min", type=float, default=0.0)
    p.add_argument("--max", type=float, default=10.0)
    p.add_argument("--steps", type=int, default=101)
    p.add_argument("--scale", choices=("linear", "log"), default="linear")
    p.add_argument("--convention", choices=calib.CONVENTIONS, default=calib.INDEPENDENT)
    chain_opts(p)
    p.add_argument("--out", default=None, help="output CSV path (default stdout)")
    p.set_defaults(func=cmd_scan_j)

    p = sub.add_parser("find-fair-j", help="smallest J giving Bob a mean payoff of 1/2")
    chain_opts(p)
    p.add_argument("--tol", type=_positive(float), default=1e-6)
    p.add_argument("--convention", choices=calib.CONVENTIONS, default=calib.INDEPENDENT)
    p.set_defaults(func=cmd_find_fair_j)

    p = sub.add_parser("optimize", help="maximise a player's payoff over control pulses")
    p.add_argument("--player", choices=optim.PLAYERS, required=True)
    chain_opts(p)
    p.add_argument("--J", type=float, default=None, help="coupling (default: fair value for n=2)")
    p.add_argument("--N", type=_positive(int), default=3, help="pulses per move")
    p.add_argument("--restarts", type=_positive(int), default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, help="output JSON path (default stdout)")
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("play", help="play one game and print the payoff")
    p.add_argument("mode", choices=("demo-meyer", "single", "chain"))
    p.add_argument("--alice", default="pauli", help="move spec, or two joined by '/'")
    p.add_argument("--bob", default="pauli")
    p.add_argument("--samples", type=_samples, default=None, help="'exhaustive' or a count")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--controls", default=None, help="controls JSON written by 'optimize'")
    p.add_argument("--n", type=_chain_length, default=None)
    p.add_argument("--J", type=float, default=None)
    p.add_argument("--T", type=_positive(float), default=None)
    table_opt(p)
    p.set_defaults(func=cmd_play)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
