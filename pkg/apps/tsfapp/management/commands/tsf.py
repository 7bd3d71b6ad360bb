from django.core.management.base import BaseCommand
from marshmallow import ValidationError

import tsf.utils  # noqa: F401  configures logging
from tsf.exceptions import TsfError
from tsf.handlers.errors import errors_handler
from tsf.loader import dp


class Command(BaseCommand):
    help = 'Triple spectral fusion for IMU activity recognition'

    def add_arguments(self, parser):
        # handlers register their subcommands on import
        import tsf.handlers  # noqa: F401

        dp.build_parser(parser)

    def handle(self, *args, **options):
        subcommand = options["subcommand"]
        try:
            summary = dp.dispatch(options)
        except (TsfError, ValidationError) as exc:
            raise errors_handler(subcommand, exc) from exc
        self.stdout.write(self.style.SUCCESS(f'{subcommand}: {summary}'))
