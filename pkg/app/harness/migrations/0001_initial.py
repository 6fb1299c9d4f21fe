# Generated by Django 4.2.8 on 2026-10-17 09:12

from django.db import migrations, models
import django.db.models.deletion


class Migration(migrations.Migration):
    initial = True

    dependencies = []

    operations = [
        migrations.CreateModel(
            name="ExperimentRun",
            fields=[
                (
                    "id",
                    models.BigAutoField(
                        auto_created=True,
                        primary_key=True,
                        serialize=False,
                        verbose_name="ID",
                    ),
                ),
                ("name", models.CharField(max_length=255)),
                ("slug", models.SlugField(max_length=255, unique=True)),
                ("dataset", models.CharField(max_length=255)),
                ("method", models.CharField(max_length=32)),
                ("params", models.JSONField(default=dict)),
                ("sampling", models.JSONField(default=dict)),
                ("trials", models.PositiveIntegerField()),
                ("seed", models.BigIntegerField()),
                ("micro_mean", models.FloatField()),
                ("micro_std", models.FloatField()),
                ("macro_mean", models.FloatField()),
                ("macro_std", models.FloatField()),
                ("wall_time_mean", models.FloatField()),
                ("created_at", models.DateTimeField(auto_now_add=True)),
            ],
            options={
                "verbose_name": "Experiment run",
                "ordering": ("-created_at",),
            },
        ),
        migrations.CreateModel(
            name="TrialRecord",
            fields=[
                (
                    "id",
                    models.BigAutoField(
                        auto_created=True,
                        primary_key=True,
                        serialize=False,
                        verbose_name="ID",
                    ),
                ),
                ("index", models.PositiveIntegerField()),
                ("seed", models.BigIntegerField()),
                ("micro_f1", models.FloatField()),
                ("macro_f1", models.FloatField()),
                ("wall_time", models.FloatField()),
                ("unreachable", models.PositiveIntegerField(default=0)),
                (
                    "run",
                    models.ForeignKey(
                        on_delete=django.db.models.deletion.CASCADE,
                        related_name="trial_records",
                        to="harness.experimentrun",
                    ),
                ),
            ],
            options={
                "verbose_name": "Trial",
                "ordering": ("run", "index"),
            },
        ),
        migrations.AddConstraint(
            model_name="trialrecord",
            constraint=models.UniqueConstraint(
                fields=("run", "index"), name="unique_trial_index"
            ),
        ),
    ]
