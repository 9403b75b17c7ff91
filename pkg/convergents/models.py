from django.db import models


class BoundClass(models.TextChoices):
    CONVERGENT = "CONVERGENT", "Convergent"
    SEMICONVERGENT = "SEMICONVERGENT", "Semiconvergent"
    OTHER = "OTHER", "Other"
