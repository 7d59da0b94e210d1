# Generated by Django 5.2.9 on 2026-10-19 09:00

from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = []

    operations = [
        migrations.CreateModel(
            name='SimulationRun',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('created', models.DateTimeField(auto_now_add=True)),
                ('strategy', models.CharField(choices=[('dense', 'Dense matrix baseline'), ('paired', 'Amplitude pairing, unbounded window'), ('paired-cached', 'Amplitude pairing, bounded window'), ('paired-cached-parallel', 'Amplitude pairing, parallel workers')], max_length=32)),
                ('circuit_path', models.CharField(blank=True, max_length=1024)),
                ('state_path', models.CharField(blank=True, max_length=1024)),
                ('n_qubits', models.PositiveIntegerField()),
                ('block_amps', models.PositiveBigIntegerField()),
                ('cache_bytes', models.PositiveBigIntegerField(blank=True, null=True)),
                ('workers', models.PositiveIntegerField(default=1)),
                ('gates_applied', models.PositiveBigIntegerField(default=0)),
                ('traversals', models.PositiveBigIntegerField(default=0)),
                ('blocks_read', models.PositiveBigIntegerField(default=0)),
                ('blocks_written', models.PositiveBigIntegerField(default=0)),
                ('bytes_read', models.PositiveBigIntegerField(default=0)),
                ('bytes_written', models.PositiveBigIntegerField(default=0)),
                ('cache_hits', models.PositiveBigIntegerField(default=0)),
                ('cache_misses', models.PositiveBigIntegerField(default=0)),
                ('peak_cache_bytes', models.PositiveBigIntegerField(default=0)),
                ('wall_ms', models.FloatField(default=0)),
                ('norm', models.FloatField(blank=True, null=True)),
                ('succeeded', models.BooleanField(default=False)),
                ('error', models.TextField(blank=True)),
            ],
            options={
                'ordering': ['-created', '-id'],
            },
        ),
    ]
