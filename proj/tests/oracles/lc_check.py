from nist_examples import berlekamp
from scipy.special import gammaincc
f=open('/tmp/e.txt').read(); e=[int(c) for c in '10'+f[:999998]]
M=1000;N=len(e)//M
mu=M/2+(9+(-1)**(M+1))/36-(M/3+2/9)/2**M
nu=[0]*7
for j in range(N):
    L=berlekamp(e[j*M:(j+1)*M]); T=(-1)**M*(L-mu)+2/9
    k=0 if T<=-2.5 else 1 if T<=-1.5 else 2 if T<=-0.5 else 3 if T<=0.5 else 4 if T<=1.5 else 5 if T<=2.5 else 6
    nu[k]+=1
print(nu)
for pis in ([0.010417,0.03125,0.125,0.5,0.25,0.0625,0.020833],[0.01047,0.03125,0.125,0.5,0.25,0.0625,0.020833]):
    chi=sum((nu[i]-N*pis[i])**2/(N*pis[i]) for i in range(7)); print(chi,gammaincc(3,chi/2))
