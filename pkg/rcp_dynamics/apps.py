from django.apps import AppConfig


class RcpDynamicsConfig(AppConfig):
    name = 'rcp_dynamics'
    verbose_name = 'RCP dynamics'
