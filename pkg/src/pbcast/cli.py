"""Command line front end.

Exit codes follow a three-way split: ``0`` success, ``2`` cryptographic
rejection (an input that parsed or decrypted to nothing a recipient should
accept), ``64`` usage errors.  Secret key material is only ever written to
key files, never to stdout.

Every subcommand takes ``--seed`` for reproducible randomness; when the
flag is absent the ``PBCAST_SEED`` environment variable is honoured, and
with neither the system entropy pool is used.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import adversary, improved, original
from .broadcast import RecipientSet, Scheme
from .primitives import (
    SUPPORTED_SECURITY_LEVELS,
    CryptoError,
    RejectMode,
    broadcaster_from_secret,
    pke_init,
)
from .rng import Rng
from .wire import (
    KeyRole,
    WireError,
    parse_ciphertext,
    read_key_file,
    serialize_ciphertext,
    write_key_file,
)

EXIT_OK = 0
EXIT_REJECT = 2
EXIT_USAGE = 64


class _Parser(argparse.ArgumentParser):
    """argparse with the usage exit code this tool promises."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _fail_usage(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return EXIT_USAGE


def _rng_for(args) -> Rng:
    seed = args.seed
    if seed is None:
        env = os.environ.get("PBCAST_SEED")
        if env is not None:
            try:
                seed = int(env)
            except ValueError:
                seed = env
    return Rng(seed)


def _params_for(args):
    return pke_init(getattr(args, "level", 128))


def build_parser() -> _Parser:
    seeded = _Parser(add_help=False)
    seeded.add_argument("--seed", type=int, default=None,
                        help="deterministic randomness seed")
    leveled = _Parser(add_help=False)
    leveled.add_argument("--level", type=int, default=128,
                         choices=SUPPORTED_SECURITY_LEVELS,
                         help="security level (default 128)")

    parser = _Parser(prog="pbcast",
                     description="recipient-anonymous broadcast encryption")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    p = sub.add_parser("keygen", parents=[seeded, leveled],
                       help="generate a recipient keypair")
    p.add_argument("--out", required=True, metavar="PREFIX",
                   help="write PREFIX.pk and PREFIX.sk")
    p.set_defaults(handler=_cmd_keygen)

    p = sub.add_parser("bcast-keygen", parents=[seeded, leveled],
                       help="generate a broadcaster keypair")
    p.add_argument("--out", required=True, metavar="PREFIX",
                   help="write PREFIX.pk and PREFIX.sk")
    p.set_defaults(handler=_cmd_bcast_keygen)

    p = sub.add_parser("encrypt", parents=[seeded, leveled],
                       help="broadcast a message to a set of recipients")
    p.add_argument("--scheme", required=True, choices=[s.label for s in Scheme])
    p.add_argument("--to", action="append", required=True, metavar="PKFILE",
                   help="recipient public key file (repeatable)")
    p.add_argument("--bcast-key", metavar="SKFILE",
                   help="broadcaster secret key file (improved scheme)")
    p.add_argument("--in", dest="infile", required=True, metavar="FILE",
                   help="plaintext message file")
    p.add_argument("--out", required=True, metavar="FILE",
                   help="ciphertext output file")
    p.set_defaults(handler=_cmd_encrypt)

    p = sub.add_parser("decrypt", parents=[seeded, leveled],
                       help="attempt decryption as one recipient")
    p.add_argument("--key", required=True, metavar="SKFILE",
                   help="recipient secret key file")
    p.add_argument("--bcast-pub", metavar="PKFILE",
                   help="trusted broadcaster public key file (improved scheme)")
    p.add_argument("--mode", choices=[m.value for m in RejectMode],
                   default=RejectMode.STRICT.value,
                   help="failure-reporting mode (default strict)")
    p.add_argument("--in", dest="infile", required=True, metavar="FILE",
                   help="ciphertext file")
    p.add_argument("--out", metavar="FILE",
                   help="plaintext output file (default stdout)")
    p.set_defaults(handler=_cmd_decrypt)

    p = sub.add_parser("attack", help="run an adversary transformation")
    attack_sub = p.add_subparsers(dest="attack", required=True, metavar="attack")

    a = attack_sub.add_parser("forge-origin", parents=[seeded, leveled],
                              help="broadcast without any authority to")
    a.add_argument("--scheme", required=True, choices=[s.label for s in Scheme])
    a.add_argument("--to", action="append", required=True, metavar="PKFILE")
    a.add_argument("--in", dest="infile", required=True, metavar="FILE",
                   help="attacker-chosen message file")
    a.add_argument("--out", required=True, metavar="FILE")
    a.set_defaults(handler=_cmd_attack_forge)

    a = attack_sub.add_parser("splice", parents=[seeded],
                              help="reuse sealed components over a new body")
    a.add_argument("--variant", choices=adversary.SPLICE_VARIANTS,
                   default="copy-sig")
    a.add_argument("--in", dest="infile", required=True, metavar="CTFILE",
                   help="honest ciphertext to splice from")
    a.add_argument("--payload", required=True, metavar="FILE",
                   help="attacker-chosen message file")
    a.add_argument("--out", required=True, metavar="FILE")
    a.set_defaults(handler=_cmd_attack_splice)

    p = sub.add_parser("bench", parents=[seeded],
                       help="measure recipient decryption cost")
    p.add_argument("--scheme", required=True, choices=[s.label for s in Scheme])
    p.add_argument("--n", type=int, required=True, help="recipient count")
    p.add_argument("--role", required=True,
                   choices=[r.value for r in adversary.Role])
    p.add_argument("--mode", choices=[m.value for m in RejectMode],
                   default=RejectMode.STRICT.value)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--message-len", type=int, default=64)
    p.add_argument("--out", metavar="CSV",
                   help="also write the rows here and render figures next to it")
    p.add_argument("--no-fig", action="store_true",
                   help="with --out, skip the figures")
    p.set_defaults(handler=_cmd_bench)

    p = sub.add_parser("inspect", help="describe a ciphertext envelope")
    p.add_argument("--in", dest="infile", required=True, metavar="CTFILE")
    p.set_defaults(handler=_cmd_inspect)

    return parser


# ---------------------------------------------------------------------------
# Handlers.  Each returns an exit code.

def _write_keypair(prefix: str, public_role: KeyRole, secret_role: KeyRole,
                   params, public_key: bytes, secret_key: bytes) -> int:
    pk_path, sk_path = Path(prefix + ".pk"), Path(prefix + ".sk")
    write_key_file(pk_path, public_role, params, public_key)
    write_key_file(sk_path, secret_role, params, secret_key)
    print(f"wrote {public_role.label} key: {pk_path}")
    print(f"wrote {secret_role.label} key: {sk_path}")
    return EXIT_OK


def _cmd_keygen(args) -> int:
    params = _params_for(args)
    kp = original.keygen(params, rng=_rng_for(args))
    return _write_keypair(args.out, KeyRole.RECIPIENT_PUBLIC,
                          KeyRole.RECIPIENT_SECRET, params,
                          kp.public_key, kp.secret_key)


def _cmd_bcast_keygen(args) -> int:
    params = _params_for(args)
    kp = improved.keygen_broadcaster(params, rng=_rng_for(args))
    return _write_keypair(args.out, KeyRole.BROADCASTER_PUBLIC,
                          KeyRole.BROADCASTER_SECRET, params,
                          kp.public_key, kp.secret_key)


def _read_recipients(paths: list[str], params) -> RecipientSet:
    keys = []
    for path in paths:
        _, pk = read_key_file(path, expected_role=KeyRole.RECIPIENT_PUBLIC,
                              params=params)
        keys.append(pk)
    return RecipientSet(tuple(keys))


def _cmd_encrypt(args) -> int:
    params = _params_for(args)
    scheme = Scheme.ORIGINAL if args.scheme == Scheme.ORIGINAL.label else Scheme.IMPROVED
    recipients = _read_recipients(args.to, params)
    message = Path(args.infile).read_bytes()
    rng = _rng_for(args)
    if scheme is Scheme.ORIGINAL:
        if args.bcast_key:
            return _fail_usage("--bcast-key only applies to the improved scheme")
        ct = original.encrypt(recipients, message, rng=rng)
    else:
        if not args.bcast_key:
            return _fail_usage("the improved scheme needs --bcast-key")
        _, sk = read_key_file(args.bcast_key,
                              expected_role=KeyRole.BROADCASTER_SECRET,
                              params=params)
        ct = improved.encrypt(recipients, message, broadcaster_from_secret(sk),
                              rng=rng)
    blob = serialize_ciphertext(ct)
    Path(args.out).write_bytes(blob)
    print(f"wrote {scheme.label} ciphertext: {args.out} "
          f"({len(ct)} components, {len(blob)} bytes)")
    return EXIT_OK


def _cmd_decrypt(args) -> int:
    params = _params_for(args)
    _, secret_key = read_key_file(args.key,
                                  expected_role=KeyRole.RECIPIENT_SECRET,
                                  params=params)
    ct = parse_ciphertext(Path(args.infile).read_bytes())
    mode = RejectMode(args.mode)
    if ct.scheme is Scheme.ORIGINAL:
        if args.bcast_pub:
            return _fail_usage("--bcast-pub only applies to improved ciphertexts")
        plaintext = original.decrypt(secret_key, ct, mode=mode)
    else:
        if not args.bcast_pub:
            return _fail_usage("improved ciphertexts need --bcast-pub to verify against")
        _, trusted = read_key_file(args.bcast_pub,
                                   expected_role=KeyRole.BROADCASTER_PUBLIC,
                                   params=params)
        plaintext = improved.decrypt(secret_key, trusted, ct, mode=mode)
    if plaintext is None:
        print("rejected: ciphertext does not decrypt under this key", file=sys.stderr)
        return EXIT_REJECT
    if args.out:
        Path(args.out).write_bytes(plaintext)
    else:
        sys.stdout.buffer.write(plaintext)
        sys.stdout.buffer.flush()
    return EXIT_OK


def _cmd_attack_forge(args) -> int:
    params = _params_for(args)
    scheme = Scheme.ORIGINAL if args.scheme == Scheme.ORIGINAL.label else Scheme.IMPROVED
    recipients = _read_recipients(args.to, params)
    message = Path(args.infile).read_bytes()
    ct = adversary.forge_origin(recipients, message, scheme=scheme,
                                rng=_rng_for(args))
    Path(args.out).write_bytes(serialize_ciphertext(ct))
    print(f"wrote forged {scheme.label} ciphertext: {args.out}")
    if scheme is Scheme.IMPROVED:
        print("note: signed under an attacker-generated broadcaster key; "
              "recipients who trust the real one will reject it")
    return EXIT_OK


def _cmd_attack_splice(args) -> int:
    ct = parse_ciphertext(Path(args.infile).read_bytes())
    payload = Path(args.payload).read_bytes()
    spliced = adversary.splice_component(ct, payload, variant=args.variant,
                                         rng=_rng_for(args))
    Path(args.out).write_bytes(serialize_ciphertext(spliced))
    print(f"wrote spliced ciphertext ({args.variant}): {args.out}")
    return EXIT_OK


def _cmd_bench(args) -> int:
    if args.n <= 0 or args.trials <= 0:
        return _fail_usage("--n and --trials must be positive")
    scheme = Scheme.ORIGINAL if args.scheme == Scheme.ORIGINAL.label else Scheme.IMPROVED
    report = adversary.run_cost_experiment(
        scheme=scheme,
        n=args.n,
        role=adversary.Role(args.role),
        mode=RejectMode(args.mode),
        trials=args.trials,
        message_len=args.message_len,
        rng=_rng_for(args),
    )
    for line in report.csv_lines():
        print(line)
    for line in report.summary_lines():
        print(line, file=sys.stderr)
    if args.out:
        from .report import render_cost_figures, write_cost_csv

        written = [write_cost_csv(report, args.out)]
        if not args.no_fig:
            written.extend(render_cost_figures(report, Path(args.out).with_suffix("")))
        for path in written:
            print(f"wrote {path}", file=sys.stderr)
    return EXIT_OK


def _cmd_inspect(args) -> int:
    data = Path(args.infile).read_bytes()
    ct = parse_ciphertext(data)
    print(f"scheme:           {ct.scheme.label}")
    print(f"signature bytes:  {len(ct.signature)}")
    print(f"components:       {len(ct.components)}")
    print(f"component bytes:  {len(ct.components[0])}")
    print(f"message ct bytes: {len(ct.message_ct)}")
    print(f"total bytes:      {len(data)}")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # --help exits 0; _Parser.error exits 64
        code = exc.code
        return code if isinstance(code, int) else EXIT_OK
    try:
        return args.handler(args)
    except WireError as exc:
        print(f"rejected: {exc}", file=sys.stderr)
        return EXIT_REJECT
    except CryptoError as exc:
        print(f"rejected: {exc}", file=sys.stderr)
        return EXIT_REJECT
    except ValueError as exc:
        return _fail_usage(str(exc))
    except OSError as exc:
        return _fail_usage(str(exc))


if __name__ == "__main__":
    raise SystemExit(main())
