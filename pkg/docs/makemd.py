import os

# 현재 디렉토리 및 프로젝트 디렉토리 설정
current_dir = os.path.dirname(os.path.abspath(__file__))
project_dir = os.path.dirname(current_dir)
docs_dir = os.path.join(project_dir, 'docs', 'source')

# 문서를 만들 모듈 목록
modules = [
    'coexistence_sim.base',
    'coexistence_sim.config',
    'coexistence_sim.customerror',
    'coexistence_sim.utils',
    'coexistence_sim.validation',
    'coexistence_sim.receiver',
    'coexistence_sim.metrics',
    'coexistence_sim.harness',
    'coexistence_sim.plotting',
    'coexistence_sim.cli',
    'coexistence_sim.waveform.base',
    'coexistence_sim.waveform.pilots',
    'coexistence_sim.waveform.messages',
    'coexistence_sim.waveform.design',
    'coexistence_sim.solvers.base',
    'coexistence_sim.solvers.amp',
    'coexistence_sim.solvers.admm',
    'coexistence_sim.solvers.sbl',
    'coexistence_sim.solvers.somp',
]


def create_module_content(module_name, module_path):
    return '# ' + module_name + ' 모듈\n\n```{eval-rst}\n.. automodule:: ' + module_path + '\n   :members:\n   :undoc-members:\n   :show-inheritance:\n```\n'


# 이미 있는 파일은 덮어쓰지 않습니다.
for module in modules:
    module_name = module.split('.')[-1]
    file_path = os.path.join(docs_dir, module.replace('.', '/') + '.md')
    os.makedirs(os.path.dirname(file_path), exist_ok=True)
    if os.path.exists(file_path):
        print(f"{file_path} 파일이 이미 존재합니다.")
        continue
    with open(file_path, 'w', encoding='utf-8') as f:
        f.write(create_module_content(module_name, module))

print("필요한 모듈 파일이 생성되었습니다.")
