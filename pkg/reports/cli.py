from __future__ import annotations

import os
import sys
from typing import TextIO

from django.core.management.base import CommandError

EXIT_OK = 0


def run(argv: list[str], *, stdout: TextIO | None = None, stderr: TextIO | None = None) -> int:
    """
    Run `cyclometria` with argv (subcommand first) and return the exit code.

    Usage errors and bad parameters give 1, a strict audit with misprints 2.
    """
    from reports.management.commands.cyclometria import Command

    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    command = Command(stdout=stdout, stderr=stderr)
    try:
        parser = command.create_parser("manage.py", "cyclometria")
        options = vars(parser.parse_args(argv))
        args = options.pop("args", ())
        command.execute(*args, **options)
    except CommandError as exc:
        stderr.write(f"cyclometria: {exc}\n")
        return exc.returncode
    except SystemExit as exc:
        # --help
        return exc.code if isinstance(exc.code, int) else EXIT_OK
    return EXIT_OK


def main() -> None:
    os.environ.setdefault("DJANGO_SETTINGS_MODULE", "cyclometria.settings")
    import django

    django.setup()
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
