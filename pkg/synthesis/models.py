from django.db import models


class BoundKind(models.TextChoices):
    DEFECTIVE = "DEFECTIVE", "Defective"
    EXCESSIVE = "EXCESSIVE", "Excessive"


# Table 1 marks defective ratios with a dagger and excessive ones with a dash.
BOUND_MARKS = {
    BoundKind.DEFECTIVE: "†",
    BoundKind.EXCESSIVE: "—",
}
