from django.db import models, transaction
from slugify import slugify


class ExperimentRunManager(models.Manager):
    """Manager for stored experiments."""

    def unique_slug(self, name):
        base = slugify(name) or "run"
        slug, suffix = base, 2
        while self.filter(slug=slug).exists():
            slug = f"{base}-{suffix}"
            suffix += 1
        return slug

    @transaction.atomic
    def create_run(self, result, name=None):
        """Store an ``ExperimentResult`` and its trials, return the run."""
        name = name or f"{result.dataset} {result.method.name}"
        run = self.create(
            name=name,
            slug=self.unique_slug(name),
            dataset=result.dataset,
            method=result.method.name,
            params=result.method.params(),
            sampling=result.sampling.as_dict(),
            trials=len(result.trials),
            seed=result.seed,
            micro_mean=result.micro_mean,
            micro_std=result.micro_std,
            macro_mean=result.macro_mean,
            macro_std=result.macro_std,
            wall_time_mean=result.wall_time_mean,
        )
        TrialRecord.objects.bulk_create(
            TrialRecord(
                run=run,
                index=trial.index,
                seed=trial.seed,
                micro_f1=trial.micro_f1,
                macro_f1=trial.macro_f1,
                wall_time=trial.wall_time,
                unreachable=trial.unreachable,
            )
            for trial in result.trials
        )
        return run


class ExperimentRun(models.Model):
    class Meta:
        verbose_name = "Experiment run"
        ordering = ("-created_at",)

    name = models.CharField(max_length=255)
    slug = models.SlugField(unique=True, db_index=True, max_length=255)
    dataset = models.CharField(max_length=255)
    method = models.CharField(max_length=32)
    params = models.JSONField(default=dict)
    sampling = models.JSONField(default=dict)
    trials = models.PositiveIntegerField()
    seed = models.BigIntegerField()
    micro_mean = models.FloatField()
    micro_std = models.FloatField()
    macro_mean = models.FloatField()
    macro_std = models.FloatField()
    wall_time_mean = models.FloatField()
    created_at = models.DateTimeField(auto_now_add=True)

    objects = ExperimentRunManager()

    def __str__(self):
        return f"{self.slug}: {self.method} on {self.dataset} ({self.micro_mean:.3f})"


class TrialRecord(models.Model):
    class Meta:
        verbose_name = "Trial"
        ordering = ("run", "index")
        constraints = [
            models.UniqueConstraint(fields=("run", "index"), name="unique_trial_index"),
        ]

    run = models.ForeignKey(
        ExperimentRun, on_delete=models.CASCADE, related_name="trial_records"
    )
    index = models.PositiveIntegerField()
    seed = models.BigIntegerField()
    micro_f1 = models.FloatField()
    macro_f1 = models.FloatField()
    wall_time = models.FloatField()
    unreachable = models.PositiveIntegerField(default=0)

    def __str__(self):
        return f"{self.run.slug} #{self.index}"
