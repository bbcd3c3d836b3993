# Generated by Django 5.2.4 on 2026-10-19 09:00

import django.db.models.deletion
from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = [
    ]

    operations = [
        migrations.CreateModel(
            name='Vehicle',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('vehicle_id', models.CharField(db_index=True, max_length=100, unique=True)),
                ('created_at', models.DateTimeField(auto_now_add=True)),
            ],
            options={
                'ordering': ['vehicle_id'],
            },
        ),
        migrations.CreateModel(
            name='SampleRecord',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('seq', models.BigIntegerField()),
                ('timestamp', models.BigIntegerField(db_index=True, help_text='Agent clock, UTC milliseconds')),
                ('speed_kmh', models.PositiveSmallIntegerField()),
                ('maf_gs', models.FloatField()),
                ('fuel_l_per_km', models.FloatField(blank=True, help_text='Null while standing still', null=True)),
                ('cumulative_distance_km', models.FloatField()),
                ('period_s', models.FloatField(default=1.0)),
                ('lat', models.FloatField(blank=True, null=True)),
                ('lon', models.FloatField(blank=True, null=True)),
                ('fix_time', models.CharField(blank=True, max_length=12, null=True)),
                ('fix_status', models.CharField(blank=True, max_length=1, null=True)),
                ('received_at', models.BigIntegerField(help_text='Server clock, UTC milliseconds')),
                ('vehicle', models.ForeignKey(on_delete=django.db.models.deletion.CASCADE, related_name='samples', to='fleet.vehicle')),
            ],
            options={
                'ordering': ['vehicle', 'seq'],
                'constraints': [models.UniqueConstraint(fields=('vehicle', 'seq'), name='unique_vehicle_seq')],
            },
        ),
    ]
