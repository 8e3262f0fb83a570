from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = []

    operations = [
        migrations.CreateModel(
            name='ExperimentRun',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('command', models.CharField(max_length=50)),
                ('mode', models.CharField(blank=True, max_length=20)),
                ('config', models.JSONField(default=dict)),
                ('master_seed', models.BigIntegerField(default=0)),
                ('threads', models.PositiveIntegerField(default=1)),
                ('tool_version', models.CharField(max_length=20)),
                ('wall_time', models.FloatField(help_text='Seconds')),
                ('passed', models.BooleanField(default=False)),
                ('checks', models.JSONField(blank=True, default=list)),
                ('output_dir', models.CharField(max_length=500)),
                ('created_at', models.DateTimeField(auto_now_add=True)),
            ],
            options={
                'ordering': ['-created_at'],
            },
        ),
    ]
