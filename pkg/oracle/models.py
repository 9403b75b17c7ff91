from django.db import models

# No tables: the oracle only shares its vocabulary with the other apps.


class Comparison(models.TextChoices):
    LESS = "LESS", "Less"
    GREATER = "GREATER", "Greater"
    INCONCLUSIVE = "INCONCLUSIVE", "Inconclusive"
