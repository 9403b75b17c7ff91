from django.db import models


class RowKind(models.TextChoices):
    DEFECT = "DEFECT", "Defectus"
    EXCESS = "EXCESS", "Excessus"
    REFERENCE = "REFERENCE", "Archimedis Ratio"


class Classification(models.TextChoices):
    CONFIRMED = "CONFIRMED", "Confirmed"
    PAPER_MISPRINT = "PAPER_MISPRINT", "Paper misprint"
    TRANSLATOR_MISPRINT = "TRANSLATOR_MISPRINT", "Translator misprint"
    CONVENTION_AMBIGUITY = "CONVENTION_AMBIGUITY", "Convention ambiguity"


class Convention(models.TextChoices):
    EXACT = "EXACT", "Exact first"
    TRUNCATED_DIFFERENCE = "TRUNCATED_DIFFERENCE", "Difference of truncations"
    ROUNDED = "ROUNDED", "Rounded"
    CARRIED_FORWARD = "CARRIED_FORWARD", "Carried forward"
    NONE = "NONE", "None"
